import pytest

from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.exceptions.problem_exceptions import RelationSyntaxException
from algebraic_learning.problems.relation_dsl import (
    format_relations,
    load_relations,
    parse_relation,
    parse_relations,
    save_relations,
)

SAMPLE = """
# a small world
pos a < b + c
neg  d<a

pos x+y < z
"""


class TestParseRelations:
    """Test suite for the relation text format."""

    def test_parse_sample(self):
        """Test that comments and blank lines are skipped and sides are split on '+'."""
        assert parse_relations(SAMPLE) == [
            RelationSpec.positive("a", ["b", "c"]),
            RelationSpec.negative("d", "a"),
            RelationSpec.positive(["x", "y"], "z"),
        ]

    @pytest.mark.parametrize(
        "line",
        [
            "maybe a < b",
            "pos a b",
            "pos a < b < c",
            "pos a < b +",
            "neg a b < c",
            "pos",
        ],
    )
    def test_syntax_errors(self, line):
        """Test that malformed lines raise RelationSyntaxException."""
        with pytest.raises(RelationSyntaxException):
            parse_relation(line)

    def test_error_names_the_line(self):
        """Test that the reported line number counts blank and comment lines."""
        with pytest.raises(RelationSyntaxException) as error:
            parse_relations("# header\n\npos a < b\npos a <\n")

        assert "line 4" in str(error.value.details)

    def test_format(self):
        """Test the text written for a term on each side."""
        specs = [RelationSpec.negative(["p", "q"], ["r", "s"])]

        assert format_relations(specs) == "neg p+q < r+s\n"

    def test_save_and_load(self, tmp_path):
        """Test that a saved file parses to the same relations."""
        specs = parse_relations(SAMPLE)
        path = tmp_path / "world.rel"

        save_relations(path, specs)

        assert load_relations(path) == specs
