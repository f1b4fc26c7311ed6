"""
Textual format of the IR.

    function := "func" name "(" reg ("," reg)* ")" "entry" int "{" (int ":" instr)* "}"
    instr    := "nop" "->" int | reg ":=" int-literal "->" int
              | reg ":=" "move" reg "->" int | reg ":=" op reg reg "->" int
              | "if" cmp reg reg "->" int "," int | "return" reg

Comments run from "#" to the end of the line. Straight-line block files use
the same instructions without location labels, an optional ``inputs:`` header
and a ``live:`` trailer.
"""

import re
from dataclasses import dataclass

from rtlcheck.errors import IRSyntaxError
from rtlcheck.ir.function import Function
from rtlcheck.ir.instructions import (
    BLOCK_INSTRS,
    BinOp,
    Branch,
    Cmp,
    Const,
    Instr,
    Move,
    Nop,
    Op,
    Return,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<space>[ \t\r]+)
  | (?P<assign>:=)
  | (?P<arrow>->)
  | (?P<number>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.]*)
  | (?P<punct>[(){},:])
  | (?P<error>.)
    """,
    re.VERBOSE,
)

_REG_RE = re.compile(r"r(\d+)")

_OPS = {op.value: op for op in BinOp}
_CMPS = {cmp.value: cmp for cmp in Cmp}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        column = match.start() - line_start + 1
        if kind == "newline":
            line += 1
            line_start = match.end()
            continue
        if kind in ("space", "comment"):
            continue
        if kind == "error":
            raise IRSyntaxError(f"unexpected character {match.group()!r}", line, column)
        tokens.append(Token(kind, match.group(), line, column))
    tokens.append(Token("eof", "", line, len(text) - line_start + 1))
    return tokens


@dataclass(frozen=True)
class Block:
    """
    A straight-line block: non-branching instructions executed in order.

    Attributes
    ----------
    instrs : tuple[Instr, ...]
        the instructions, successors ignored
    inputs : tuple[int, ...] | None
        registers declared as inputs, None when not declared
    live : tuple[int, ...] | None
        registers live at the end, None when not declared
    """

    instrs: tuple[Instr, ...]
    inputs: tuple[int, ...] | None = None
    live: tuple[int, ...] | None = None


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Token | None = None) -> IRSyntaxError:
        token = token if token is not None else self.current
        return IRSyntaxError(message, token.line, token.column)

    def advance(self) -> Token:
        token = self.current
        if token.kind != "eof":
            self.pos += 1
        return token

    def at(self, kind: str, text: str | None = None) -> bool:
        token = self.current
        return token.kind == kind and (text is None or token.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            wanted = text if text is not None else kind
            found = self.current.text or "end of input"
            raise self.error(f"expected {wanted!r}, found {found!r}")
        return self.advance()

    def number(self) -> int:
        return int(self.expect("number").text)

    def location(self) -> int:
        token = self.current
        value = self.number()
        if value < 1:
            raise self.error(f"locations are positive, got {value}", token)
        return value

    def register(self) -> int:
        token = self.expect("ident")
        match = _REG_RE.fullmatch(token.text)
        if match is None:
            raise self.error(f"expected a register, found {token.text!r}", token)
        value = int(match.group(1))
        if value < 1:
            raise self.error(f"registers are positive, got {token.text}", token)
        return value

    def register_list(self, closing: str | None) -> list[int]:
        regs = []
        if closing is not None and self.at("punct", closing):
            return regs
        regs.append(self.register())
        while self.at("punct", ","):
            self.advance()
            regs.append(self.register())
        return regs

    def successor(self, optional: bool) -> int:
        if optional and not self.at("arrow"):
            return 0
        self.expect("arrow")
        return self.location()

    def instr(self, in_block: bool = False) -> Instr:
        token = self.current
        if self.at("ident", "nop"):
            self.advance()
            return Nop(self.successor(in_block))
        if self.at("ident", "return"):
            if in_block:
                raise self.error("return is not allowed in a block")
            self.advance()
            return Return(self.register())
        if self.at("ident", "if"):
            if in_block:
                raise self.error("branches are not allowed in a block")
            self.advance()
            cmp_token = self.expect("ident")
            if cmp_token.text not in _CMPS:
                raise self.error(f"unknown comparison {cmp_token.text!r}", cmp_token)
            src1, src2 = self.register(), self.register()
            self.expect("arrow")
            ifso = self.location()
            self.expect("punct", ",")
            ifnot = self.location()
            return Branch(_CMPS[cmp_token.text], src1, src2, ifso, ifnot)

        if token.kind != "ident" or _REG_RE.fullmatch(token.text) is None:
            raise self.error(f"expected an instruction, found {token.text!r}")
        dst = self.register()
        self.expect("assign")
        if self.at("number"):
            value = self.number()
            return Const(dst, value, self.successor(in_block))
        if self.at("ident", "move"):
            self.advance()
            src = self.register()
            return Move(dst, src, self.successor(in_block))
        op_token = self.expect("ident")
        if op_token.text not in _OPS:
            raise self.error(f"unknown operator {op_token.text!r}", op_token)
        src1, src2 = self.register(), self.register()
        return Op(dst, _OPS[op_token.text], src1, src2, self.successor(in_block))

    def function(self) -> Function:
        self.expect("ident", "func")
        name = self.expect("ident").text
        self.expect("punct", "(")
        params = self.register_list(")")
        self.expect("punct", ")")
        self.expect("ident", "entry")
        entry_token = self.current
        entry = self.location()
        self.expect("punct", "{")
        code: dict[int, Instr] = {}
        refs: list[tuple[int, Token]] = []
        while not self.at("punct", "}"):
            loc_token = self.current
            loc = self.location()
            if loc in code:
                raise self.error(f"duplicate location {loc}", loc_token)
            self.expect("punct", ":")
            instr_token = self.current
            code[loc] = self.instr()
            refs.extend((succ, instr_token) for succ in code[loc].successors())
        self.expect("punct", "}")

        if entry not in code:
            raise self.error(f"undefined location {entry}", entry_token)
        for succ, token in refs:
            if succ not in code:
                raise self.error(f"undefined location {succ}", token)
        if len(set(params)) != len(params):
            raise self.error(f"duplicate parameter in function {name}", entry_token)
        return Function.build(name, params, entry, code)

    def program(self) -> list[Function]:
        functions = []
        while not self.at("eof"):
            functions.append(self.function())
        return functions

    def block(self) -> Block:
        inputs = None
        live = None
        if self.at("ident", "inputs"):
            self.advance()
            self.expect("punct", ":")
            inputs = tuple(self.register_list(None))
        instrs = []
        while not self.at("eof"):
            if self.at("ident", "live"):
                self.advance()
                self.expect("punct", ":")
                live = tuple(self.register_list(None) if self.at("ident") else [])
                break
            instrs.append(self.instr(in_block=True))
        self.expect("eof")
        return Block(tuple(instrs), inputs, live)


def parse_program(text: str) -> list[Function]:
    """
    Parse every function of a program text

    Raises
    ------
    IRSyntaxError
        with the line and column of the first error
    """
    return _Parser(text).program()


def parse(text: str) -> Function:
    """
    Parse a text holding exactly one function

    Examples
    --------
    >>> parse("func f(r1) entry 1 { 1: return r1 }").params
    (1,)
    """
    parser = _Parser(text)
    function = parser.function()
    if not parser.at("eof"):
        raise parser.error("expected a single function")
    return function


def parse_block(text: str) -> Block:
    return _Parser(text).block()


def print_instr(instr: Instr, with_succ: bool = True) -> str:
    def arrow(succ: int) -> str:
        return f" -> {succ}" if with_succ else ""

    match instr:
        case Nop(succ):
            return "nop" + arrow(succ)
        case Const(dst, value, succ):
            return f"r{dst} := {value}" + arrow(succ)
        case Move(dst, src, succ):
            return f"r{dst} := move r{src}" + arrow(succ)
        case Op(dst, op, src1, src2, succ):
            return f"r{dst} := {op.value} r{src1} r{src2}" + arrow(succ)
        case Branch(cmp, src1, src2, ifso, ifnot):
            return f"if {cmp.value} r{src1} r{src2} -> {ifso}, {ifnot}"
        case Return(src):
            return f"return r{src}"


def print_function(f: Function) -> str:
    """
    Print a function, locations in decreasing order (entry first once renumbered).
    """
    params = ", ".join(f"r{r}" for r in f.params)
    lines = [f"func {f.name}({params}) entry {f.entry} {{"]
    for loc, instr in reversed(f.code.bindings()):
        lines.append(f"  {loc}: {print_instr(instr)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_program(functions: list[Function]) -> str:
    return "\n".join(print_function(f) for f in functions)


def print_block(block: Block) -> str:
    lines = []
    if block.inputs is not None:
        lines.append("inputs: " + ", ".join(f"r{r}" for r in block.inputs))
    for instr in block.instrs:
        if not isinstance(instr, BLOCK_INSTRS):
            raise IRSyntaxError(f"{type(instr).__name__} is not allowed in a block")
        lines.append(print_instr(instr, with_succ=False))
    if block.live is not None:
        lines.append("live: " + ", ".join(f"r{r}" for r in block.live))
    return "\n".join(lines) + "\n"
