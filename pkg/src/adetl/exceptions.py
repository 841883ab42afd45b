# exceptions.py

class AdetlError(Exception):
    pass


class ModelError(AdetlError):
    """Invalid Dynkin data, exponent index, boundary or twist."""
    pass


class DiagramError(AdetlError):
    pass


class ScalarError(AdetlError):
    pass


class SingularValueError(AdetlError):
    """A q-number, q-factorial or projector constant has a vanishing denominator."""
    pass


class InsertionStateError(AdetlError):
    pass
