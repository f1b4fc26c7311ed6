"""
Random and parametric program generators used by the tests, the benches and
the ``gen`` command.

Generated code is write-before-read: every non-parameter register is given a
constant before the first instruction that may read it.
"""

import random

from rtlcheck.ir.cfg import renumber
from rtlcheck.ir.function import Function
from rtlcheck.ir.instructions import BinOp, Branch, Cmp, Const, Instr, Move, Nop, Op, Return
from rtlcheck.ir.parser import Block

_CONST_RANGE = (-10, 10)


def _random_op(rng: random.Random, allow_div: bool, allow_mul: bool = True) -> BinOp:
    ops = [
        op
        for op in BinOp
        if (allow_div or not op.may_trap) and (allow_mul or op is not BinOp.MUL)
    ]
    return rng.choice(ops)


def random_function(
    rng: random.Random,
    nb_locations: int = 20,
    nb_registers: int = 6,
    nb_params: int = 2,
    name: str = "gen",
    allow_div: bool = True,
    allow_mul: bool = True,
) -> Function:
    """
    Draw a random renumbered function.

    Parameters
    ----------
    rng : random.Random
        the source of randomness, the result only depends on its state
    nb_locations : int, optional
        number of instructions of the body, by default 20
    nb_registers : int, optional
        registers r1 to r<nb_registers> are used, by default 6
    nb_params : int, optional
        the first registers are parameters, by default 2
    name : str, optional
        function name, by default "gen"
    allow_div : bool, optional
        whether divisions may appear, by default True
    allow_mul : bool, optional
        whether multiplications may appear, by default True. Loops of
        multiplications square their operands at each iteration.

    Returns
    -------
    Function
        a function with at most nb_locations + nb_registers + 1 locations,
        all reachable; branches may jump backward and create loops
    """
    nb_params = min(nb_params, nb_registers)
    regs = list(range(1, nb_registers + 1))
    prefix = nb_registers - nb_params
    size = prefix + nb_locations + 1

    def loc(idx: int) -> int:
        return size - idx

    instrs: list[Instr] = [
        Const(r, rng.randint(*_CONST_RANGE), loc(idx + 1))
        for idx, r in enumerate(regs[nb_params:])
    ]

    for idx in range(prefix, prefix + nb_locations):
        nxt = loc(idx + 1)
        kind = rng.choices(
            ["op", "const", "move", "branch", "nop"], weights=[5, 2, 2, 3, 1]
        )[0]
        match kind:
            case "op":
                instrs.append(
                    Op(
                        rng.choice(regs),
                        _random_op(rng, allow_div, allow_mul),
                        rng.choice(regs),
                        rng.choice(regs),
                        nxt,
                    )
                )
            case "const":
                instrs.append(Const(rng.choice(regs), rng.randint(*_CONST_RANGE), nxt))
            case "move":
                instrs.append(Move(rng.choice(regs), rng.choice(regs), nxt))
            case "branch":
                target = loc(rng.randrange(prefix, size))
                instrs.append(
                    Branch(
                        rng.choice(list(Cmp)),
                        rng.choice(regs),
                        rng.choice(regs),
                        target,
                        nxt,
                    )
                )
            case "nop":
                instrs.append(Nop(nxt))
    instrs.append(Return(rng.choice(regs)))

    code = {loc(idx): instr for idx, instr in enumerate(instrs)}
    return renumber(Function.build(name, regs[:nb_params], loc(0), code))


def counting_loop(bound: int = 10, name: str = "loop") -> Function:
    """
    ``i := 0; while i < bound do i := i + 1; return i`` with i in r1.
    """
    code: dict[int, Instr] = {
        6: Const(1, 0, 5),
        5: Const(2, bound, 4),
        4: Const(3, 1, 3),
        3: Branch(Cmp.LT, 1, 2, 2, 1),
        2: Op(1, BinOp.ADD, 1, 3, 3),
        1: Return(1),
    }
    return Function.build(name, [], 6, code)


def diamond_function(nb_keys: int, touched: int, name: str = "diamond") -> Function:
    """
    A function tracking ``nb_keys`` registers through one if-then-else whose
    two branches write the same ``touched`` registers with different constants.

    The states reaching the merge share everything but the touched registers,
    which is the situation where a join can reuse whole subtrees.

    Layout (locations decreasing)::

        r2 .. r<nb_keys+1> := constants
        if lt r1 r1 -> then, else
        then: r2 .. r<touched+1> := 1
        else: r2 .. r<touched+1> := 2
        merge: return r1
    """
    touched = max(1, min(touched, nb_keys))
    size = nb_keys + 1 + 2 * touched + 1
    code: dict[int, Instr] = {}
    loc = size
    for r in range(2, nb_keys + 2):
        code[loc] = Const(r, r, loc - 1)
        loc -= 1
    branch_loc = loc
    then_start = branch_loc - 1
    else_start = then_start - touched
    merge = 1
    code[branch_loc] = Branch(Cmp.LT, 1, 1, then_start, else_start)
    for i in range(touched):
        succ = then_start - i - 1 if i < touched - 1 else merge
        code[then_start - i] = Const(2 + i, 1, succ)
    for i in range(touched):
        succ = else_start - i - 1 if i < touched - 1 else merge
        code[else_start - i] = Const(2 + i, 2, succ)
    code[merge] = Return(1)
    return Function.build(name, [1], size, code)


def chain_block(n: int, op: BinOp = BinOp.MUL) -> Block:
    """
    ``r2 := op r1 r1; ...; r<n+1> := op r<n> r<n>``: the value of r<n+1> is a
    complete binary tree of depth n over r1.
    """
    instrs = tuple(Op(i + 1, op, i, i, 0) for i in range(1, n + 1))
    return Block(instrs, inputs=(1,), live=(n + 1,))


def random_block(
    rng: random.Random,
    nb_instrs: int = 8,
    nb_registers: int = 5,
    nb_inputs: int = 2,
    allow_div: bool = True,
) -> Block:
    """
    Draw a random straight-line block whose reads only touch inputs or
    registers written earlier.
    """
    inputs = tuple(range(1, nb_inputs + 1))
    defined = list(inputs)
    instrs: list[Instr] = []
    for _ in range(nb_instrs):
        dst = rng.randint(1, nb_registers)
        kind = rng.choices(["op", "const", "move"], weights=[5, 1, 1])[0]
        match kind:
            case "op":
                instrs.append(
                    Op(dst, _random_op(rng, allow_div), rng.choice(defined), rng.choice(defined), 0)
                )
            case "const":
                instrs.append(Const(dst, rng.randint(*_CONST_RANGE), 0))
            case "move":
                instrs.append(Move(dst, rng.choice(defined), 0))
        if dst not in defined:
            defined.append(dst)
    return Block(tuple(instrs), inputs=inputs, live=tuple(sorted(defined)))
