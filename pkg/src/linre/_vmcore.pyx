# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Pike VM kernel; mirrors ``_vmpy.execute`` instruction for instruction."""

from libc.stdlib cimport free, malloc

from .regstore import list_materialize, tree_depth, tree_empty, tree_materialize

cdef enum:
    CONSUME = 0
    CONSUME_CLASS = 1
    CONSUME_ANY = 2
    CONSUME_ALL = 3
    JUMP = 4
    FORK = 5
    ACCEPT = 6
    SET_REG = 7
    CLEAR_REG = 8
    BEGIN_LOOP = 9
    END_LOOP = 10
    SET_QUANT = 11
    WRITE_ORACLE = 12
    CHECK_ORACLE = 13
    NEG_CHECK_ORACLE = 14
    WRITE_LB = 15
    CHECK_LB = 16
    NEG_CHECK_LB = 17
    SET_NULL_PLUS = 18
    CHECK_NULL = 19
    ASSERT = 20
    STORE_ARRAY = 0
    STORE_LIST = 1




cdef inline bint _word(Py_UCS4 c):
    return (c >= 48 and c <= 57) or (c >= 65 and c <= 90) or (c >= 97 and c <= 122) or c == 95


cdef inline bint _line_term(Py_UCS4 c):
    return c == 10 or c == 13 or c == 0x2028 or c == 0x2029


cdef bint _anchor(int code, unicode text, Py_ssize_t n, Py_ssize_t i):
    cdef bint before, after, boundary
    if code == 0:
        return i == 0
    if code == 1:
        return i == n
    before = i > 0 and _word(text[i - 1])
    after = i < n and _word(text[i])
    boundary = before != after
    return boundary if code == 2 else not boundary


cdef object _tset(object tree, int depth, long idx, long val):
    cdef list path = []
    cdef int d, bit
    node = tree
    for d in range(depth - 1, -1, -1):
        bit = (idx >> d) & 1
        path.append((node, bit))
        node = node[bit]
    new = val
    for k in range(len(path) - 1, -1, -1):
        node, bit = path[k]
        new = (node[0], new) if bit else (new, node[1])
    return new


def execute(
    ops, aa, bb, objs, sensitive, entries, Py_ssize_t main_start, int direction, unicode text,
    Py_ssize_t start, rows, int n_lb, int store, Py_ssize_t reg_size, Py_ssize_t n_slots,
    Py_ssize_t lclk_off, bint empty_only, null_check, profile,
):
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t nprog = len(ops)
    cdef bint fwd = direction > 0
    cdef Py_ssize_t cap = 4 * nprog + len(entries) + 4
    cdef int *c_ops = <int *> malloc(nprog * sizeof(int))
    cdef long *c_a = <long *> malloc(nprog * sizeof(long))
    cdef long *c_b = <long *> malloc(nprog * sizeof(long))
    cdef char *c_sens = <char *> malloc(nprog * sizeof(char))
    cdef long *seen = <long *> malloc(2 * nprog * sizeof(long))
    cdef int *act_pc = <int *> malloc(cap * sizeof(int))
    cdef char *act_left = <char *> malloc(cap * sizeof(char))
    cdef int *nxt_pc = <int *> malloc(cap * sizeof(int))
    cdef char *nxt_left = <char *> malloc(cap * sizeof(char))
    cdef char *lb = <char *> malloc((n_lb + 1) * sizeof(char))
    cdef list act_regs = [None] * cap
    cdef list nxt_regs = [None] * cap
    cdef Py_ssize_t n_act = 0, n_nxt = 0, k, j
    cdef long clk = 0, forks = 0, slot_copies = 0, aux_copies = 0
    cdef long peak = 0, steps = 0, step
    cdef Py_ssize_t i, first, last, best_end = -1
    cdef int pc, op, tdepth = tree_depth(reg_size)
    cdef long r1, r2, v1, v2, key
    cdef bint left, has_ch, main_alive
    cdef Py_UCS4 ch = 0
    cdef list lregs
    cdef bint streaming = main_start > 0
    cdef long aux_per_copy = reg_size - n_slots
    cdef object best = None
    cdef bint matched = False
    cdef list prof = profile
    cdef object regs

    try:
        for k in range(nprog):
            c_ops[k] = ops[k]
            c_a[k] = aa[k]
            c_b[k] = bb[k]
            c_sens[k] = sensitive[k]
        for k in range(2 * nprog):
            seen[k] = -1
        empty_tree = tree_empty(tdepth) if store not in (STORE_ARRAY, STORE_LIST) else None
        for k in range(len(entries) - 1, -1, -1):
            act_pc[n_act] = entries[k]
            act_left[n_act] = 1
            if store == STORE_ARRAY:
                act_regs[n_act] = [-1] * reg_size
            elif store == STORE_LIST:
                act_regs[n_act] = None
            else:
                act_regs[n_act] = empty_tree
            n_act += 1

        if empty_only:
            first = start
            last = start
        elif fwd:
            first = start
            last = n
        else:
            first = start
            last = 0
        i = first
        step = 0
        while True:
            if n_act == 0:
                break
            steps += 1
            if n_act > peak:
                peak = n_act
            has_ch = False
            if not empty_only:
                if fwd:
                    if i < n:
                        ch = text[i]
                        has_ch = True
                else:
                    if i > 0:
                        ch = text[i - 1]
                        has_ch = True
            for k in range(n_lb + 1):
                lb[k] = 0
            n_nxt = 0
            while n_act > 0:
                n_act -= 1
                pc = act_pc[n_act]
                left = act_left[n_act]
                regs = act_regs[n_act]
                act_regs[n_act] = None
                while True:
                    if not c_sens[pc]:
                        left = True
                    key = 2 * pc + left
                    if seen[key] == step:
                        break
                    seen[key] = step
                    clk += 1
                    if prof is not None:
                        prof[pc] += 1
                    op = c_ops[pc]
                    if op == CONSUME:
                        if has_ch and <long> ch == c_a[pc]:
                            nxt_pc[n_nxt] = pc + 1
                            nxt_left[n_nxt] = 1
                            nxt_regs[n_nxt] = regs
                            n_nxt += 1
                        break
                    elif op == JUMP:
                        pc = c_a[pc]
                        continue
                    elif op == FORK:
                        forks += 1
                        act_pc[n_act] = c_b[pc]
                        act_left[n_act] = left
                        if store == STORE_ARRAY:
                            lregs = regs
                            act_regs[n_act] = lregs[:]
                            slot_copies += n_slots
                            aux_copies += aux_per_copy
                        else:
                            act_regs[n_act] = regs
                        n_act += 1
                        pc = c_a[pc]
                        continue
                    elif op == CONSUME_ALL:
                        if has_ch:
                            nxt_pc[n_nxt] = pc + 1
                            nxt_left[n_nxt] = 1
                            nxt_regs[n_nxt] = regs
                            n_nxt += 1
                        break
                    elif op == CONSUME_ANY:
                        if has_ch and not _line_term(ch):
                            nxt_pc[n_nxt] = pc + 1
                            nxt_left[n_nxt] = 1
                            nxt_regs[n_nxt] = regs
                            n_nxt += 1
                        break
                    elif op == CONSUME_CLASS:
                        if has_ch and objs[pc].matches(ch):
                            nxt_pc[n_nxt] = pc + 1
                            nxt_left[n_nxt] = 1
                            nxt_regs[n_nxt] = regs
                            n_nxt += 1
                        break
                    elif op == ACCEPT:
                        best = regs
                        matched = True
                        best_end = i
                        for j in range(n_act):
                            act_regs[j] = None
                        n_act = 0
                        break
                    elif op == SET_REG or op == SET_QUANT or op == SET_NULL_PLUS:
                        r1 = c_a[pc]
                        r2 = c_b[pc]
                        if op == SET_REG:
                            v1 = i
                            v2 = clk
                        elif op == SET_QUANT:
                            v1 = clk
                            v2 = -1
                        else:
                            v1 = clk
                            v2 = i
                        if store == STORE_ARRAY:
                            lregs = regs
                            lregs[r1] = v1
                            if r2 >= 0:
                                lregs[r2] = v2
                        elif store == STORE_LIST:
                            regs = (r1, v1, regs)
                            if r2 >= 0:
                                regs = (r2, v2, regs)
                        else:
                            regs = _tset(regs, tdepth, r1, v1)
                            if r2 >= 0:
                                regs = _tset(regs, tdepth, r2, v2)
                    elif op == CLEAR_REG:
                        r1 = c_a[pc]
                        if store == STORE_ARRAY:
                            lregs = regs
                            lregs[r1] = -1
                            lregs[r1 + 1] = -1
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
                        if not rows[c_a[pc]][i]:
                            break
                        r1 = c_b[pc]
                        if r1 >= 0:
                            if store == STORE_ARRAY:
                                lregs = regs
                                lregs[r1] = i
                                lregs[r1 + lclk_off] = clk
                            elif store == STORE_LIST:
                                regs = (r1 + lclk_off, clk, (r1, i, regs))
                            else:
                                regs = _tset(_tset(regs, tdepth, r1, i), tdepth, r1 + lclk_off, clk)
                    elif op == NEG_CHECK_ORACLE:
                        if rows[c_a[pc]][i]:
                            break
                    elif op == WRITE_ORACLE:
                        rows[c_a[pc]][i] = 1
                        break
                    elif op == WRITE_LB:
                        lb[c_a[pc]] = 1
                        break
                    elif op == CHECK_LB:
                        if not lb[c_a[pc]]:
                            break
                    elif op == NEG_CHECK_LB:
                        if lb[c_a[pc]]:
                            break
                    elif op == CHECK_NULL:
                        if not null_check(c_a[pc], i, [lb[k] for k in range(n_lb + 1)] if n_lb else None):
                            break
                    elif op == ASSERT:
                        if not _anchor(c_a[pc], text, n, i):
                            break
                    else:
                        raise RuntimeError("bad opcode %d at %d" % (op, pc))
                    pc += 1
            if streaming:
                main_alive = False
                for k in range(n_nxt):
                    if nxt_pc[k] >= main_start:
                        main_alive = True
                        break
                if not main_alive:
                    break
            # next becomes active, reversed so the first pushed is popped first
            for k in range(n_nxt):
                act_pc[k] = nxt_pc[n_nxt - 1 - k]
                act_left[k] = nxt_left[n_nxt - 1 - k]
                act_regs[k] = nxt_regs[n_nxt - 1 - k]
                nxt_regs[n_nxt - 1 - k] = None
            n_act = n_nxt
            if i == last:
                break
            i += 1 if fwd else -1
            step += 1
    finally:
        free(c_ops)
        free(c_a)
        free(c_b)
        free(c_sens)
        free(seen)
        free(act_pc)
        free(act_left)
        free(nxt_pc)
        free(nxt_left)
        free(lb)

    regs_out = None
    if matched:
        if store == STORE_ARRAY:
            regs_out = list(best)
        elif store == STORE_LIST:
            regs_out = list_materialize(best, reg_size)
        else:
            regs_out = tree_materialize(best, tdepth, reg_size)
    return (matched, regs_out, best_end, clk, forks, slot_copies, aux_copies, peak, steps)
