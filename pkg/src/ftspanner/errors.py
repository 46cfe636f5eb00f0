"""Exception types shared across the package."""


class FTSpannerError(Exception):
    pass


class PerturbationTie(FTSpannerError):
    """Two distinct equal-hop paths received the same perturbation sum.

    Builders catch this and retry with the next seed.
    """


class VertexOutsideTree(FTSpannerError):
    pass


class EdgeNotInGraph(FTSpannerError):
    pass


class UncoverableVertex(FTSpannerError):
    pass


class UnclusteredVertex(FTSpannerError):
    pass


class ClusteringViolation(FTSpannerError):
    pass


class NotASubgraph(FTSpannerError):
    pass


class InfeasibleModel(FTSpannerError):
    pass


class ParseError(FTSpannerError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
