import pytest

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.problems.images import BarLabeler
from algebraic_learning.training.streams import (
    BarImageStream,
    DatasetStream,
    ExhaustiveStream,
    RelationStream,
)


class TestBarImageStream:
    """Test suite for freshly generated bar batches."""

    def test_batch_sizes_and_signs(self):
        """Test that a batch has the requested positives first, then negatives."""
        stream = BarImageStream(3, 3, 0.2, seed=1)

        batch = stream.next_batch(4, 2)

        assert [r.is_positive for r in batch] == [True] * 4 + [False] * 2

    def test_register_creates_the_pixel_constants(self):
        """Test the constant table of a 3x3 stream."""
        state = AlgebraState(0)

        BarImageStream(3, 3, 0.0).register(state)

        assert state.constant_count == 19

    def test_bad_noise(self):
        """Test that noise 1 raises ValueError."""
        with pytest.raises(ValueError):
            BarImageStream(3, 3, 1.0)

    def test_parity_labeler(self):
        """Test that the stream forwards its labeler."""
        stream = BarImageStream(3, 2, 0.0, labeler=BarLabeler.PARITY_OF_BARS, seed=3)

        examples = stream.next_examples(3, 3)

        assert all(BarLabeler.PARITY_OF_BARS.label(e.image) == e.label for e in examples)


class TestDatasetStream:
    """Test suite for batches drawn from a finite dataset."""

    def test_examples_are_drawn_without_replacement(self, toy_examples):
        """Test that one pass returns each example of a class once."""
        stream = DatasetStream(toy_examples, seed=0)

        examples = stream.next_examples(2, 3)

        assert sorted(e.image.render() for e in examples) == sorted(
            e.image.render() for e in toy_examples
        )

    def test_requests_are_capped_by_the_pool(self, toy_examples):
        """Test that asking for more than a class holds returns the whole class."""
        stream = DatasetStream(toy_examples, seed=0)

        batch = stream.next_batch(10, 0)

        assert len(batch) == 2

    def test_pools_are_reshuffled(self, toy_examples):
        """Test that draws continue after a class runs out."""
        stream = DatasetStream(toy_examples, seed=0)

        stream.next_examples(0, 2)
        second = stream.next_examples(0, 2)

        assert len(second) == 2
        assert all(not e.label for e in second)

    def test_empty_dataset(self):
        """Test that a stream needs examples."""
        with pytest.raises(ValueError):
            DatasetStream([])


class TestFixedStreams:
    """Test suite for streams returning the same batch every epoch."""

    def test_exhaustive_stream_ignores_sizes(self):
        """Test that every 2x2 image is returned whatever the request."""
        stream = ExhaustiveStream(2, 2)

        assert len(stream.next_batch(1, 1)) == 16
        assert len(stream.next_batch(0, 0)) == 16

    def test_relation_stream(self):
        """Test that a relation stream registers its names and repeats its relations."""
        relations = [
            RelationSpec.positive("a", ["b", "c"]),
            RelationSpec.negative("d", "a"),
        ]
        stream = RelationStream(relations)
        state = AlgebraState(0)

        stream.register(state)

        assert state.constant_names == ("a", "b", "c", "d")
        assert stream.next_batch(0, 0) == relations
        assert stream.next_batch(0, 0) is not stream.next_batch(0, 0)
