"""Pure-Python Pike VM kernel.

Same signature and semantics as the compiled ``_vmcore.execute``; used when
the extension is unavailable or ``LINRE_PURE_PYTHON=1``.
"""

from __future__ import annotations

from .regstore import list_materialize, tree_depth, tree_empty, tree_materialize
from .syntax import LINE_TERMINATORS, is_word_char

# op codes, mirrored from bytecode.Op as plain ints for speed
CONSUME, CONSUME_CLASS, CONSUME_ANY, CONSUME_ALL, JUMP, FORK, ACCEPT = range(7)
SET_REG, CLEAR_REG, BEGIN_LOOP, END_LOOP, SET_QUANT = range(7, 12)
WRITE_ORACLE, CHECK_ORACLE, NEG_CHECK_ORACLE, WRITE_LB, CHECK_LB, NEG_CHECK_LB = range(12, 18)
SET_NULL_PLUS, CHECK_NULL, ASSERT = range(18, 21)

STORE_ARRAY, STORE_LIST, STORE_TREE = 0, 1, 2


def _anchor(code: int, text: str, n: int, i: int) -> bool:
    if code == 0:
        return i == 0
    if code == 1:
        return i == n
    boundary = is_word_char(text[i - 1] if i > 0 else None) != is_word_char(text[i] if i < n else None)
    return boundary if code == 2 else not boundary


def execute(
    ops, aa, bb, objs, sensitive, entries, main_start, direction, text, start,
    rows, n_lb, store, reg_size, n_slots, lclk_off, empty_only, null_check, profile,
):
    """Run one program; returns (matched, regs, end, instr, forks, slot_copies,
    aux_copies, threads_peak, steps)."""
    n = len(text)
    nprog = len(ops)
    fwd = direction > 0
    if empty_only:
        positions = (start,)
    elif fwd:
        positions = range(start, n + 1)
    else:
        positions = range(start, -1, -1)

    seen = [-1] * (2 * nprog)
    aux_per_copy = reg_size - n_slots
    tdepth = tree_depth(reg_size)

    if store == STORE_ARRAY:
        def init():
            return [-1] * reg_size
    elif store == STORE_LIST:
        def init():
            return None
    else:
        empty_tree = tree_empty(tdepth)

        def init():
            return empty_tree

    active = [(e, init(), True) for e in reversed(entries)]
    clk = 0
    forks = slot_copies = aux_copies = 0
    peak = 0
    steps = 0
    best = None
    matched = False
    best_end = -1
    lb = None
    streaming = main_start > 0

    for step, i in enumerate(positions):
        if not active:
            break
        steps += 1
        if len(active) > peak:
            peak = len(active)
        if empty_only:
            ch = None
        elif fwd:
            ch = text[i] if i < n else None
        else:
            ch = text[i - 1] if i > 0 else None
        if n_lb:
            lb = [False] * (n_lb + 1)
        nxt = []
        while active:
            pc, regs, left = active.pop()
            while True:
                # dedup on (label, left); where left cannot reach an EndLoop
                # the two flag values are the same state
                if not sensitive[pc]:
                    left = True
                key = pc + pc + left
                if seen[key] == step:
                    break
                seen[key] = step
                clk += 1
                if profile is not None:
                    profile[pc] += 1
                op = ops[pc]
                if op == CONSUME:
                    if ch is not None and ch == objs[pc]:
                        nxt.append((pc + 1, regs, True))
                    break
                elif op == JUMP:
                    pc = aa[pc]
                    continue
                elif op == FORK:
                    forks += 1
                    if store == STORE_ARRAY:
                        copy = regs[:]
                        slot_copies += n_slots
                        aux_copies += aux_per_copy
                    else:
                        copy = regs
                    active.append((bb[pc], copy, left))
                    pc = aa[pc]
                    continue
                elif op == CONSUME_ALL:
                    if ch is not None:
                        nxt.append((pc + 1, regs, True))
                    break
                elif op == CONSUME_ANY:
                    if ch is not None and ch not in LINE_TERMINATORS:
                        nxt.append((pc + 1, regs, True))
                    break
                elif op == CONSUME_CLASS:
                    if ch is not None and objs[pc].matches(ch):
                        nxt.append((pc + 1, regs, True))
                    break
                elif op == ACCEPT:
                    best = regs
                    matched = True
                    best_end = i
                    active.clear()
                    break
                elif op == SET_REG or op == SET_QUANT or op == SET_NULL_PLUS:
                    r1 = aa[pc]
                    r2 = bb[pc]
                    if op == SET_REG:
                        v1, v2 = i, clk
                    elif op == SET_QUANT:
                        v1, v2 = clk, -1
                    else:
                        v1, v2 = clk, i
                    if store == STORE_ARRAY:
                        regs[r1] = v1
                        if r2 >= 0:
                            regs[r2] = v2
                    elif store == STORE_LIST:
                        regs = (r1, v1, regs)
                        if r2 >= 0:
                            regs = (r2, v2, regs)
                    else:
                        regs = _tset(regs, tdepth, r1, v1)
                        if r2 >= 0:
                            regs = _tset(regs, tdepth, r2, v2)
                elif op == CLEAR_REG:
                    r1 = aa[pc]
                    if store == STORE_ARRAY:
                        regs[r1] = -1
                        regs[r1 + 1] = -1
                    elif store == STORE_LIST:
                        regs = (r1 + 1, -1, (r1, -1, regs))
                    else:
                        regs = _tset(_tset(regs, tdepth, r1, -1), tdepth, r1 + 1, -1)
                elif op == BEGIN_LOOP:
                    left = False
                elif op == END_LOOP:
                    if not left:
                        break
                elif op == CHECK_ORACLE:
                    if not rows[aa[pc]][i]:
                        break
                    r1 = bb[pc]
                    if r1 >= 0:
                        if store == STORE_ARRAY:
                            regs[r1] = i
                            regs[r1 + lclk_off] = clk
                        elif store == STORE_LIST:
                            regs = (r1 + lclk_off, clk, (r1, i, regs))
                        else:
                            regs = _tset(_tset(regs, tdepth, r1, i), tdepth, r1 + lclk_off, clk)
                elif op == NEG_CHECK_ORACLE:
                    if rows[aa[pc]][i]:
                        break
                elif op == WRITE_ORACLE:
                    rows[aa[pc]][i] = 1
                    break
                elif op == WRITE_LB:
                    lb[aa[pc]] = True
                    break
                elif op == CHECK_LB:
                    if not lb[aa[pc]]:
                        break
                elif op == NEG_CHECK_LB:
                    if lb[aa[pc]]:
                        break
                elif op == CHECK_NULL:
                    if not null_check(aa[pc], i, lb):
                        break
                elif op == ASSERT:
                    if not _anchor(aa[pc], text, n, i):
                        break
                else:
                    raise RuntimeError(f"bad opcode {op} at {pc}")
                pc += 1
        if streaming:
            for t in nxt:
                if t[0] >= main_start:
                    break
            else:
                break
        nxt.reverse()
        active = nxt

    regs_out = None
    if matched:
        if store == STORE_ARRAY:
            regs_out = list(best)
        elif store == STORE_LIST:
            regs_out = list_materialize(best, reg_size)
        else:
            regs_out = tree_materialize(best, tdepth, reg_size)
    return (matched, regs_out, best_end, clk, forks, slot_copies, aux_copies, peak, steps)


def _tset(tree, depth, idx, val):
    path = []
    node = tree
    for d in range(depth - 1, -1, -1):
        bit = (idx >> d) & 1
        path.append((node, bit))
        node = node[bit]
    new = val
    for node, bit in reversed(path):
        new = (node[0], new) if bit else (new, node[1])
    return new
