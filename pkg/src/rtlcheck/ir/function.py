from dataclasses import dataclass

from rtlcheck.errors import IRSyntaxError, UsageError
from rtlcheck.ir.instructions import Instr
from rtlcheck.structures.ptrie import PTrie


@dataclass(frozen=True)
class Function:
    """
    A function of the IR: a control-flow graph over pseudo-registers.

    Attributes
    ----------
    name : str
        identifier of the function
    params : tuple[int, ...]
        parameter registers, in order
    entry : int
        entry location
    code : PTrie[Instr]
        instruction at each location
    """

    name: str
    params: tuple[int, ...]
    entry: int
    code: PTrie[Instr]

    def __post_init__(self) -> None:
        for r in self.params:
            if r < 1:
                raise UsageError(f"registers are positive, got r{r}")
        if len(set(self.params)) != len(self.params):
            raise IRSyntaxError(f"duplicate parameter in function {self.name}")
        if self.code.get(self.entry) is None:
            raise IRSyntaxError(f"undefined location {self.entry}")
        for loc, instr in self.code.bindings():
            for succ in instr.successors():
                if succ < 1 or self.code.get(succ) is None:
                    raise IRSyntaxError(f"undefined location {succ}")

    @classmethod
    def build(
        cls, name: str, params: list[int] | tuple[int, ...], entry: int, code: dict[int, Instr]
    ) -> "Function":
        """
        Build a function from a plain location → instruction dictionary.
        """
        return cls(name, tuple(params), entry, PTrie.from_bindings(sorted(code.items())))

    def instr(self, loc: int) -> Instr:
        found = self.code.get(loc)
        if found is None:
            raise UsageError(f"undefined location {loc}")
        return found

    @property
    def locations(self) -> list[int]:
        return self.code.keys()

    def registers(self) -> set[int]:
        """Every register read or written by the function, parameters included"""
        regs = set(self.params)
        for _, instr in self.code.bindings():
            regs.update(instr.uses())
            if instr.defined() is not None:
                regs.add(instr.defined())
        return regs

    def __len__(self) -> int:
        return len(self.code)
