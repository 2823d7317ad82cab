"""Exception types.  Every error carries a machine-readable ``code``."""


class CategoryError(Exception):
    code = "error"

    def __init__(self, message="", **witness):
        super().__init__(message)
        self.witness = witness

    def to_dict(self):
        return {"code": self.code, "message": str(self), "witness": _plain(self.witness)}


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if x is None or isinstance(x, (str, int, float, bool)):
        return x
    return str(x)


class NotFound(CategoryError):
    code = "not-found"

    def __init__(self, message="", obstruction=None, **witness):
        super().__init__(message, **witness)
        self.obstruction = obstruction or []
        self.witness.setdefault("obstruction", self.obstruction)


class SizeExceeded(CategoryError):
    code = "size-exceeded"

    def __init__(self, what, required, bound):
        super().__init__(f"{what} needs size {required}, bound is {bound}",
                         required=required, bound=bound)
        self.required = required
        self.bound = bound


class NoBaseLimit(CategoryError):
    code = "no-base-limit"


class NoBaseColimit(CategoryError):
    code = "no-base-colimit"


class NoFibreLimit(CategoryError):
    code = "no-fibre-limit"


class NotPreserved(CategoryError):
    code = "not-preserved"


class NoLeftAdjoint(CategoryError):
    code = "no-left-adjoint"


class NoRightAdjoint(CategoryError):
    code = "no-right-adjoint"


class NoFibreCoequalizer(CategoryError):
    code = "no-fibre-coequalizer"


class BeckChevalleyFailure(CategoryError):
    code = "beck-chevalley-failure"


class NotExtensive(CategoryError):
    code = "not-extensive"


class NotTractable(CategoryError):
    code = "not-tractable"


class NotALattice(CategoryError):
    code = "not-a-lattice"


class InvalidInput(CategoryError):
    code = "invalid-input"


class DocumentError(CategoryError):
    code = "document-error"

    def __init__(self, message, line=0, col=0):
        super().__init__(f"{line}:{col}: {message}", line=line, col=col)
        self.line = line
        self.col = col


class DocSyntaxError(DocumentError):
    code = "syntax-error"


class UnknownField(DocumentError):
    code = "unknown-field"


class DanglingReference(DocumentError):
    code = "dangling-reference"
