from abc import ABC, abstractmethod
from typing import List, Optional, Sequence

import numpy as np

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.problems.images import (
    BarLabeler,
    ImageEncoder,
    LabeledExample,
    exhaustive_dataset,
    sample_bar_example,
)


class ProblemStream(ABC):
    """Source of training batches for `Trainer.fit`."""

    @abstractmethod
    def register(self, state: AlgebraState) -> None:
        """
        Create the constants of the problem in a fresh algebra.

        Registering every constant before the first epoch keeps the constant
        table of all snapshots of a run identical.
        """
        pass

    @abstractmethod
    def next_batch(self, positives: int, negatives: int) -> List[RelationSpec]:
        """
        Return the relations of the next epoch.

        Args:
            positives (int): Requested number of positive relations.
            negatives (int): Requested number of negative relations.

        Returns:
            List[RelationSpec]: The batch. Streams over finite data may return
            fewer relations than requested.
        """
        pass


class ImageStream(ProblemStream):
    """A stream of labelled images encoded as class relations."""

    def __init__(self, encoder: ImageEncoder) -> None:
        self.encoder = encoder

    def register(self, state: AlgebraState) -> None:
        self.encoder.register(state)

    def next_batch(self, positives: int, negatives: int) -> List[RelationSpec]:
        return self.encoder.encode_all(self.next_examples(positives, negatives))

    @abstractmethod
    def next_examples(self, positives: int, negatives: int) -> List[LabeledExample]:
        pass


class BarImageStream(ImageStream):
    """Fresh bar images every epoch."""

    def __init__(
        self,
        width: int,
        height: int,
        noise: float,
        labeler: BarLabeler = BarLabeler.HAS_VERTICAL_BAR,
        seed: Optional[int] = 0,
    ) -> None:
        if not 0 <= noise < 1:
            raise ValueError(f"noise must be in [0, 1), got {noise}")
        super().__init__(ImageEncoder(width, height))
        self.noise = noise
        self.labeler = labeler
        self._rng = np.random.default_rng(seed)

    def next_examples(self, positives: int, negatives: int) -> List[LabeledExample]:
        args = (self._rng, self.encoder.width, self.encoder.height, self.noise, self.labeler)
        return [sample_bar_example(*args, True) for _ in range(positives)] + [
            sample_bar_example(*args, False) for _ in range(negatives)
        ]


class DatasetStream(ImageStream):
    """Balanced batches drawn without replacement from a finite dataset.

    Each class is reshuffled and reused once its examples run out.
    """

    def __init__(
        self,
        examples: Sequence[LabeledExample],
        encoder: Optional[ImageEncoder] = None,
        seed: Optional[int] = 0,
    ) -> None:
        if not examples:
            raise ValueError("a dataset stream needs examples")
        first = examples[0].image
        super().__init__(encoder or ImageEncoder(first.width, first.height))
        self._rng = np.random.default_rng(seed)
        self._pools = {
            label: [e for e in examples if e.label == label] for label in (True, False)
        }
        self._orders = {label: [] for label in (True, False)}

    def _draw(self, label: bool, count: int) -> List[LabeledExample]:
        pool = self._pools[label]
        if not pool:
            return []
        drawn = []
        order = self._orders[label]
        while len(drawn) < min(count, len(pool)):
            if not order:
                order.extend(int(i) for i in self._rng.permutation(len(pool)))
            drawn.append(pool[order.pop()])
        return drawn

    def next_examples(self, positives: int, negatives: int) -> List[LabeledExample]:
        return self._draw(True, positives) + self._draw(False, negatives)


class ExhaustiveStream(ImageStream):
    """Every image of a small grid, each epoch. Batch sizes are ignored."""

    def __init__(
        self,
        width: int,
        height: int,
        labeler: BarLabeler = BarLabeler.HAS_VERTICAL_BAR,
    ) -> None:
        super().__init__(ImageEncoder(width, height))
        self._examples = exhaustive_dataset(width, height, labeler)

    def next_examples(self, positives: int, negatives: int) -> List[LabeledExample]:
        return list(self._examples)


class RelationStream(ProblemStream):
    """The same relation set every epoch, for problems given as relations."""

    def __init__(self, relations: Sequence[RelationSpec]) -> None:
        self._relations = list(relations)

    def register(self, state: AlgebraState) -> None:
        for spec in self._relations:
            for name in spec.lhs + spec.rhs:
                state.ensure_constant(name)

    def next_batch(self, positives: int, negatives: int) -> List[RelationSpec]:
        return list(self._relations)
