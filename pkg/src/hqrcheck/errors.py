"""Exception types raised by the numerical checks."""


class HqrError(Exception):
    """Base class for all errors raised by hqrcheck."""


class DegenerateDilatation(HqrError):
    """h' vanishes (numerically) at a sample, so g'/h' is undefined."""

    def __init__(self, index, z):
        self.index = index
        self.z = z
        super().__init__(f"h' vanishes at sample {index} (z = {z:.6g})")


class NonpositiveU(HqrError):
    """u(z) <= 0 where u log u is required."""


class ZeroModulus(HqrError):
    """|f(z)| is zero where |f| must be differentiated."""


class HypothesisViolated(HqrError):
    """A theorem's hypothesis fails on the sampled data.

    ``hypothesis`` is a short machine-readable tag such as ``"u_ge_1"``.
    """

    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        self.detail = detail
        msg = hypothesis if not detail else f"{hypothesis}: {detail}"
        super().__init__(msg)
