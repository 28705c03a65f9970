"""예외 계층. 각 클래스는 CLI 종료 코드(exit_code)와 선택적 힌트(hint)를 가집니다."""


class EquivectError(RuntimeError):
    exit_code = 1
    hint: str | None = None

    def __init__(self, message: str, hint: str | None = None):
        super().__init__(message)
        if hint is not None:
            self.hint = hint

    def to_json(self) -> dict:
        out = {"error": str(self), "kind": type(self).__name__}
        if self.hint:
            out["hint"] = self.hint
        return out


class InvalidSpecError(EquivectError):
    exit_code = 2


class OutOfScopeError(EquivectError):
    exit_code = 3


class GroupTooLargeError(EquivectError):
    exit_code = 2
    hint = "raise EQUIVECT_GROUP_CAP or check the generator permutations"


class DegenerateChainError(EquivectError):
    pass


class ConsistencyError(EquivectError):
    """내부 불변식 위반. 입력이 아니라 코드의 버그를 뜻합니다."""


class ToleranceError(EquivectError):
    hint = "loosen --tolerance or check the representation matrices"


class SamplingError(EquivectError):
    hint = "increase sampling (--samples)"


class HilbertBasisCapError(EquivectError):
    hint = "raise EQUIVECT_HILBERT_CAP"


class ContextMismatchError(EquivectError):
    exit_code = 2
