"""Exception hierarchy.

Exit-code semantics for the CLI: PRECONDITION errors mean the input is
outside an operation's domain (exit 2), NEGATIVE errors mean the input is
mathematically valid but fails the property being decided (exit 3).
"""

PRECONDITION = 2
NEGATIVE = 3


class TropicurveError(Exception):
    exit_code = PRECONDITION


class DegenerateHull(TropicurveError):
    """Point set has no 2-dimensional convex hull."""


class ZeroVector(TropicurveError):
    """Primitive direction of the zero vector is undefined."""


class NotASmoothCorner(TropicurveError):
    """Vertex is missing or its corner cone is not unimodular."""


class PolygonTooSmall(TropicurveError):
    """The unit corner parallelogram does not fit inside the polygon."""


class DegenerateNewtonPolygon(TropicurveError):
    """Operation needs a 2-dimensional Newton polygon."""


class NotSimple(TropicurveError):
    """Dual subdivision has a cell other than a triangle or parallelogram."""


class NotIrreducible(TropicurveError):
    """The normalization of the curve is disconnected."""


class TooManyCycles(TropicurveError):
    """Cycle enumeration exceeded the configured limit."""


class NotLiftable(TropicurveError):
    exit_code = NEGATIVE


class WrongNodeCount(TropicurveError):
    """Operation needs a curve with exactly one node."""


class NodeNotHyperbolic(TropicurveError):
    """The node's dual parallelogram has area > 1."""


class NotHarnack(TropicurveError):
    exit_code = NEGATIVE


class MalformedParallelogram(TropicurveError):
    """Node parallelogram is not positioned as a one-node Harnack curve's."""


class NoGenericTranslationFound(TropicurveError):
    """Witness search for a transversal translation failed; this signals a
    bug in the retry logic, not a mathematical obstruction."""


class NonIntegerResult(TropicurveError):
    """Internal consistency failure: a quantity that must be integral is not."""


class GenerationFailed(TropicurveError):
    """A fixture generator violated its own invariant."""


class ParseError(TropicurveError):
    """Malformed polynomial text or JSON."""
