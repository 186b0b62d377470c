"""Exception hierarchy shared by every module of the toolkit."""


class AnosovKitError(Exception):
    """Base class for all toolkit errors."""


class NonInvertible(AnosovKitError):
    """Matrix is not invertible over the integers (det not +-1)."""


class Degenerate(AnosovKitError):
    """A^n - I is singular, so the periodic set is not finite."""


class NotPeriodic(AnosovKitError):
    """Point has no finite orbit under the given map."""


class NotNormalizing(AnosovKitError):
    """B A B^-1 is neither A nor A^-1."""


class NotClosed(AnosovKitError):
    """A set of cosets is not closed under multiplication."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotHyperbolic(AnosovKitError):
    """|trace| <= 2, so there are no real eigen-directions to speak of."""


class ZeroSlope(AnosovKitError):
    """Filling coefficient k = 0 is not a valid surgery slope here."""


class DegenerateSegment(AnosovKitError):
    """A polygonal curve has a zero-length segment."""


class BadIndex(AnosovKitError):
    """Mapping class index outside 0..3."""


class PremiseViolated(AnosovKitError):
    """A declared premise does not hold for the requested input."""

    def __init__(self, premise_id, message=None):
        super().__init__(message or f"premise {premise_id} violated")
        self.premise_id = premise_id


class MissingPremise(AnosovKitError):
    """A premise the derivation needs was not supplied."""

    def __init__(self, premise_ids):
        ids = ", ".join(sorted(premise_ids))
        super().__init__(f"refusing to conclude without premises: {ids}")
        self.premise_ids = tuple(sorted(premise_ids))


class CheckFailed(AnosovKitError):
    def __init__(self, check_id, message=None):
        super().__init__(message or f"check {check_id} failed")
        self.check_id = check_id


class StaleHash(AnosovKitError):
    """Recorded input hash does not match the stored inputs."""
