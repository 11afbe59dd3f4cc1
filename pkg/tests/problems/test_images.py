import numpy as np
import pytest
from pydantic import ValidationError

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.exceptions.problem_exceptions import (
    DimensionMismatchException,
)
from algebraic_learning.problems.images import (
    BarLabeler,
    BinaryImage,
    ImageEncoder,
    LabeledExample,
    all_images,
    exhaustive_dataset,
    gen_bar_images,
    make_bar_image,
)


class TestBinaryImage:
    """Test suite for binary images."""

    def test_from_rows_and_render(self):
        """Test that '#' is black and rendering gives the rows back."""
        image = BinaryImage.from_rows(["#..", ".#."])

        assert (image.width, image.height) == (3, 2)
        assert image.pixel(0, 0) and image.pixel(1, 1)
        assert not image.pixel(0, 1)
        assert image.render() == "#..\n.#."

    def test_from_array(self):
        """Test that any non-zero value is black."""
        image = BinaryImage.from_array(np.array([[0, 7], [0, 1]]))

        assert image.pixels == (0, 1, 0, 1)
        assert image.complete_black_columns() == 1
        np.testing.assert_array_equal(image.to_array(), [[0, 1], [0, 1]])

    def test_from_array_needs_two_dimensions(self):
        """Test that a flat array raises ValueError."""
        with pytest.raises(ValueError):
            BinaryImage.from_array(np.zeros(4))

    def test_pixel_count_checked(self):
        """Test that the pixel tuple must match the size."""
        with pytest.raises(ValidationError):
            BinaryImage(width=2, height=2, pixels=(0, 1, 0))
        with pytest.raises(ValidationError):
            BinaryImage(width=1, height=1, pixels=(2,))


class TestBarLabeler:
    """Test suite for the bar predicates."""

    @pytest.mark.parametrize(
        "rows, has_bar, odd",
        [
            (["#.", "#."], True, True),
            (["##", "##"], True, False),
            (["#.", ".#"], False, False),
        ],
    )
    def test_labels(self, rows, has_bar, odd):
        """Test both labelers on a few images."""
        image = BinaryImage.from_rows(rows)

        assert BarLabeler.HAS_VERTICAL_BAR.label(image) is has_bar
        assert BarLabeler.PARITY_OF_BARS.label(image) is odd


class TestImageEncoder:
    """Test suite for the image to relation encoding."""

    def test_constant_names(self, toy_encoder):
        """Test the constant table: black pixels, white pixels, class."""
        names = toy_encoder.constant_names()

        assert names[:2] == ["p0_0b", "p0_1b"]
        assert names[4] == "p0_0w"
        assert names[-1] == "v"
        assert len(names) == toy_encoder.pixel_constant_count + 1

    def test_encode_positive_and_negative(self, toy_encoder, toy_relations):
        """Test the toy relations."""
        first, third = toy_relations[0], toy_relations[2]

        assert first.is_positive and first.lhs == ("v",)
        assert set(first.rhs) == {"p0_0b", "p1_0b", "p0_1w", "p1_1w"}
        assert not third.is_positive
        assert set(third.rhs) == {"p0_0b", "p1_1b", "p0_1w", "p1_0w"}

    def test_register(self, toy_encoder):
        """Test that registering twice creates each constant once."""
        state = AlgebraState(0)

        toy_encoder.register(state)
        toy_encoder.register(state)

        assert state.constant_count == 9

    def test_wrong_size_rejected(self, toy_encoder):
        """Test that encoding a 3x2 image with a 2x2 encoder raises DimensionMismatchException."""
        example = LabeledExample(image=BinaryImage.from_rows(["#..", "#.."]), label=True)

        with pytest.raises(DimensionMismatchException):
            toy_encoder.encode(example)

    def test_invalid_size(self):
        """Test that a zero-sized encoder is refused."""
        with pytest.raises(ValueError):
            ImageEncoder(0, 3)

    def test_custom_class_constant(self):
        """Test the class constant name."""
        encoder = ImageEncoder(1, 1, class_constant="digit")
        example = LabeledExample(image=BinaryImage.from_rows(["#"]), label=False)

        assert encoder.encode(example).lhs == ("digit",)


class TestBarGeneration:
    """Test suite for generated bar images."""

    def test_make_bar_image_paints_the_columns(self):
        """Test that bar columns are completely black."""
        image = make_bar_image(np.random.default_rng(0), 4, 3, 0.0, [1, 3])

        assert image.render() == ".#.#\n.#.#\n.#.#"

    @pytest.mark.parametrize("labeler", list(BarLabeler))
    def test_labels_match_the_images(self, labeler):
        """Test that every generated label agrees with the predicate."""
        examples = gen_bar_images(5, 4, 0.3, labeler, 40, seed=1)

        assert all(labeler.label(e.image) == e.label for e in examples)
        assert [e.label for e in examples[:4]] == [True, False, True, False]

    def test_generation_is_reproducible(self):
        """Test that one seed gives one dataset."""
        first = gen_bar_images(4, 4, 0.5, BarLabeler.HAS_VERTICAL_BAR, 10, seed=9)
        second = gen_bar_images(4, 4, 0.5, BarLabeler.HAS_VERTICAL_BAR, 10, seed=9)

        assert first == second

    @pytest.mark.parametrize("noise", [-0.1, 1.0])
    def test_bad_noise_rejected(self, noise):
        """Test that noise outside [0, 1) raises ValueError."""
        with pytest.raises(ValueError):
            gen_bar_images(3, 3, noise, BarLabeler.HAS_VERTICAL_BAR, 2)

    def test_exhaustive_dataset(self):
        """Test that the 2x2 grid has 16 images, 7 with a vertical bar."""
        dataset = exhaustive_dataset(2, 2)

        assert len(list(all_images(2, 2))) == 16
        assert sum(e.label for e in dataset) == 7
