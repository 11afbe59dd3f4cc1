import pytest
from pydantic import ValidationError

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.exceptions.algebra_exceptions import UnknownConstantException
from algebraic_learning.training.models import (
    EpochConfig,
    ModelSnapshot,
    PinningEntry,
    ProtocolConfig,
)


class TestModelSnapshot:
    """Test suite for frozen atomizations."""

    def test_from_state(self):
        """Test that a snapshot lists sorted fingerprints of the learned atoms only."""
        state = AlgebraState(seed=4)
        a, b, c = (state.add_constant(n) for n in "abc")
        state.add_atom([c, a])
        state.add_atom([b])

        snapshot = ModelSnapshot.from_state(
            state, [PinningEntry(fingerprint=(1,))], epoch=2
        )

        assert snapshot.atoms == [(0, 2), (1,)]
        assert snapshot.constants == ["a", "b", "c"]
        assert snapshot.pinning == [(1,)]
        assert snapshot.seed == 4 and snapshot.epoch == 2

    def test_holds_on_the_toy_end_state(self, toy_snapshot, toy_relations):
        """Test that the two-atom toy model satisfies every toy relation."""
        assert all(toy_snapshot.holds_spec(spec) for spec in toy_relations)
        assert toy_snapshot.atom_count == 2

    def test_atoms_touching(self, toy_snapshot):
        """Test the atoms below the class constant."""
        class_mask = toy_snapshot.mask_of(["v"])

        assert len(toy_snapshot.atoms_touching(class_mask)) == 2
        assert toy_snapshot.atoms_touching(toy_snapshot.mask_of(["p0_0w"])) == []

    def test_unknown_constant(self, toy_snapshot):
        """Test that looking up a missing name raises UnknownConstantException."""
        assert not toy_snapshot.has_constant("zz")
        with pytest.raises(UnknownConstantException):
            toy_snapshot.holds_spec(RelationSpec.positive("zz", "v"))

    def test_pinning_entries_carry_the_epoch(self):
        """Test the entries rebuilt from a snapshot."""
        snapshot = ModelSnapshot(epoch=7, constants=["a"], atoms=[], pinning=[(0,)])

        entries = snapshot.pinning_entries()

        assert entries == [PinningEntry(fingerprint=(0,), origin_epoch=7)]
        assert entries[0].mask == 1


class TestConfigs:
    """Test suite for epoch and protocol parameters."""

    def test_epoch_defaults(self):
        """Test the defaults of one epoch."""
        config = EpochConfig(batch=[])

        assert config.epoch == 1
        assert config.reduce_every == 1
        assert not config.eliminate_redundant

    def test_protocol_rejects_unknown_fields(self):
        """Test that misspelled protocol options are refused."""
        with pytest.raises(ValidationError):
            ProtocolConfig(max_epoch=3)

    @pytest.mark.parametrize(
        "field, value",
        [("kind", "random"), ("positives", 0), ("step", 1.0), ("growth", 0.0)],
    )
    def test_protocol_bounds(self, field, value):
        """Test that out-of-range protocol values are refused."""
        with pytest.raises(ValidationError):
            ProtocolConfig(**{field: value})
