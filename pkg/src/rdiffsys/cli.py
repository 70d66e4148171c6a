"""Command-line front end.

Every command prints a human-readable section, a blank line, ``[machine]``
and then ``key = value`` lines sorted by key.  Exit status: 0 when the
command's main assertion holds, 1 when it fails, 2 for bad input and 3 when
a computation is beyond what the library can do.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from .errors import InputError, NotRLinear, RDiffError
from .fileformat import Hints, SystemFile, load, parse_hints
from .integrals import (
    CylindricalityProfile,
    IntegralCandidate,
    necessary_condition_report,
    operators_of,
    verify,
)
from .pfaffian import synthesize_pfaffian
from .series import cauchy_series, residual_check
from .spectral import spectral_synthesis
from .systems import (
    RLinearPdeSystem,
    TotalSystem,
    extract_matrices,
    frobenius_check,
    jacobian_check,
    nondegeneracy_rank,
)

__all__ = ["Report", "main", "run_command"]


@dataclass
class Report:
    ok: bool = True
    human: list = field(default_factory=list)
    machine: dict = field(default_factory=dict)

    def say(self, line: str = ""):
        self.human.append(line)

    def put(self, key: str, value):
        if isinstance(value, bool):
            value = str(value).lower()
        self.machine[key] = " ".join(str(value).split())

    def render(self) -> str:
        lines = list(self.human) + ["", "[machine]"]
        lines += [f"{k} = {self.machine[k]}" for k in sorted(self.machine)]
        return "\n".join(lines) + "\n"

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1


def _profile(args, sf: SystemFile, hints: Hints) -> CylindricalityProfile:
    if args.profile:
        return CylindricalityProfile.parse(args.profile)
    if hints.profile is not None:
        return CylindricalityProfile(hints.profile)
    raise InputError("no cylindricality profile: pass --profile or give 'hint profile'")


def _role(args, hints: Hints) -> str:
    role = args.role or hints.role
    if role is None:
        raise InputError("no role: pass --role or give 'hint role'")
    return role


def _deg_bound(args, hints: Hints) -> int:
    if args.deg_bound is not None:
        return args.deg_bound
    return hints.deg_bound if hints.deg_bound is not None else 2


# ---------------------------------------------------------------- commands


def cmd_check(sf: SystemFile, args, hints: Hints) -> Report:
    rep = Report()
    s = sf.system()
    rep.put("kind", sf.kind)
    if isinstance(s, TotalSystem):
        fr = frobenius_check(s)
        rep.ok = fr.passed
        rep.say(f"completely solvable: {'yes' if fr.passed else 'no'}")
        for fam, tau, j, zeta, r in fr.failures:
            rep.say(f"  [{fam}] w{tau}, directions {j},{zeta}: {r}")
        rep.say(f"operator brackets all null: {'yes' if fr.brackets_null else 'no'}")
        rep.put("frobenius", fr.passed)
        rep.put("frobenius.failures", len(fr.failures))
        rep.put("brackets_null", fr.brackets_null)
        if s.n == 1:
            nd = nondegeneracy_rank(s)
            rep.say(f"nondegenerate: {'yes' if nd.nondegenerate else 'no'}")
            rep.put("nondegenerate", nd.nondegenerate)
        return rep
    jac = jacobian_check(s)
    rep.ok = jac
    rep.say(f"jacobian: {'yes' if jac else 'no'}")
    rep.put("jacobian", jac)
    try:
        rs = s if isinstance(s, RLinearPdeSystem) else extract_matrices(s)
    except NotRLinear:
        rep.put("rlinear", False)
        return rep
    rep.put("rlinear", True)
    for j, A in enumerate(rs.matrices, start=1):
        rep.say(f"A{j} = [" + "; ".join(", ".join(map(str, r)) for r in A) + "]")
        rep.put(f"matrix.{j}", "[" + "; ".join(", ".join(map(str, r)) for r in A) + "]")
    return rep


def cmd_verify(sf: SystemFile, args, hints: Hints) -> Report:
    rep = Report()
    spec = sf.candidate(args.candidate)
    profile = CylindricalityProfile(spec.profile) if spec.profile is not None else None
    cand = IntegralCandidate(spec.expr, spec.role, profile)
    ops = operators_of(sf.system())
    res = verify(ops, cand, args.deg_bound if args.deg_bound is not None else hints.deg_bound)
    rep.ok = res.ok
    rep.say(f"candidate {spec.name} ({spec.role}): {cand.expr}")
    rep.say(f"result: {'ok' if res.ok else 'failed'}")
    rep.put("candidate", spec.name)
    rep.put("role", spec.role)
    rep.put("expr", cand.expr)
    rep.put("ok", res.ok)
    for j, r in enumerate(res.residuals, start=1):
        rep.put(f"residual.{j}", r)
        if not r.is_zero():
            rep.say(f"  operator {j} residual: {r}")
    if spec.role == "partial":
        for j, cf in enumerate(res.cofactors, start=1):
            if cf is None:
                rep.put(f"cofactor.{j}", "none")
                rep.say(f"  operator {j}: no cofactors found")
            else:
                rep.put(f"cofactor.{j}.alpha", cf[0])
                rep.put(f"cofactor.{j}.beta", cf[1])
                rep.say(f"  operator {j}: alpha = {cf[0]}, beta = {cf[1]}")
    return rep


def cmd_wronskian(sf: SystemFile, args, hints: Hints) -> Report:
    rep = Report()
    profile = _profile(args, sf, hints)
    role = _role(args, hints)
    f = None
    if role == "partial":
        f = IntegralCandidate(sf.candidate(args.candidate).expr, "partial").polynomial
    nc = necessary_condition_report(sf.system(), profile, role, f, _deg_bound(args, hints) if role == "partial" else None)
    rep.ok = nc.consistent
    rep.say(f"profile: {profile}; role: {role}")
    rep.put("profile", profile)
    rep.put("role", role)
    for j, funcs in enumerate(nc.tuples, start=1):
        rep.say(f"operator {j}: (" + ", ".join(map(str, funcs)) + ")")
    for r in nc.rows:
        rep.say(f"  W[{r.variable}] of operator {r.operator} = {r.wronskian}   [{r.tag}]")
        rep.put(f"wronskian.{r.operator}.{r.variable}", r.wronskian)
        rep.put(f"tag.{r.operator}.{r.variable}", r.tag)
    rep.say(f"consistent: {'yes' if nc.consistent else 'no'}")
    rep.put("consistent", nc.consistent)
    return rep


def cmd_pfaffian(sf: SystemFile, args, hints: Hints) -> Report:
    rep = Report()
    profile = _profile(args, sf, hints)
    role = _role(args, hints)
    H = None
    if role == "partial":
        nops = len(operators_of(sf.system()))
        if sorted(hints.H) != list(range(1, nops + 1)):
            raise InputError("role partial needs 'hint H[l]' for every operator")
        H = [hints.H[l] for l in range(1, nops + 1)]
    deg = _deg_bound(args, hints)
    found = synthesize_pfaffian(sf.system(), profile, role, deg, H)
    rep.ok = bool(found)
    rep.say(f"profile: {profile}; role: {role}; degree bound: {deg}")
    rep.put("profile", profile)
    rep.put("role", role)
    rep.put("deg_bound", deg)
    rep.put("count", len(found))
    for k, item in enumerate(found, start=1):
        rep.say(f"[{k}] form: {item.form}")
        rep.say(f"    result: {item.candidate.expr}")
        rep.put(f"result.{k}", item.candidate.expr)
        rep.put(f"form.{k}", item.form)
        pot = item.candidate.expr
        if role == "first" and not pot.factors and pot.exp_part.is_polynomial():
            # exp(P) is an integral exactly when P is; report the polynomial form too
            rep.say(f"    polynomial integral: {pot.exp_part}")
            rep.put(f"polynomial.{k}", pot.exp_part)
        if role == "partial":
            for j, (a, b) in enumerate(item.verification.cofactors, start=1):
                rep.say(f"    operator {j}: alpha = {a}, beta = {b}")
                rep.put(f"cofactor.{k}.{j}.alpha", a)
                rep.put(f"cofactor.{k}.{j}.beta", b)
    if not found:
        rep.say("no integral found within the degree bound")
    return rep


def cmd_spectral(sf: SystemFile, args, hints: Hints) -> Report:
    rep = Report()
    s = sf.system()
    if isinstance(s, TotalSystem):
        raise InputError("spectral synthesis needs an R-linear PDE system")
    zeta = args.zeta if args.zeta is not None else hints.zeta
    r = spectral_synthesis(
        s,
        zeta=None if zeta is None else zeta - 1,
        hints=hints.eigenvalues,
        chain_hints=hints.chains,
        allow_float=args.allow_float_discovery,
    )
    rep.put("commuting", r.commuting)
    if not r.commuting:
        rep.ok = False
        rep.say("matrices do not commute")
        return rep
    rep.say(f"distinguished operator: {r.zeta + 1}")
    rep.put("zeta", r.zeta + 1)
    for k, (c, pc) in enumerate(zip(r.chains, r.psis), start=1):
        lams = ", ".join(map(str, c.eigenvalues_by_operator))
        rep.say(f"chain {k}: eigenvalues ({lams}), nu0 = ({', '.join(map(str, c.nu0))}), length {c.multiplicity}")
        rep.put(f"chain.{k}.eigenvalues", f"({lams})")
        rep.put(f"chain.{k}.nu0", "(" + ", ".join(map(str, c.nu0)) + ")")
        rep.put(f"chain.{k}.length", c.multiplicity)
        if pc is not None:
            for eta, psi in enumerate(pc.psis, start=1):
                mus = ", ".join(str(row[eta - 1]) for row in pc.mus)
                rep.say(f"  Psi{eta} = {psi}; Lie derivatives ({mus})")
                rep.put(f"chain.{k}.psi.{eta}", psi)
                rep.put(f"chain.{k}.mu.{eta}", f"({mus})")
    for k, it in enumerate(r.integrals, start=1):
        idx = ",".join(str(i + 1) for i in it.chain_indices)
        h = ", ".join(map(str, it.h))
        rep.say(f"integral {k}: chains {idx}, h = ({h}): {it.expr}")
        rep.put(f"integral.{k}", it.expr)
        rep.put(f"integral.{k}.chains", idx)
        rep.put(f"integral.{k}.h", f"({h})")
    rep.put("count", len(r.integrals))
    rep.ok = bool(r.integrals)
    return rep


def cmd_series(sf: SystemFile, args, hints: Hints) -> Report:
    rep = Report()
    s = sf.system()
    if not isinstance(s, TotalSystem):
        raise InputError("series needs a total system")
    N = args.order if args.order is not None else (hints.order if hints.order is not None else 4)
    ts = cauchy_series(s, sf.point, N)
    D = residual_check(s, ts)
    rep.ok = D >= N - 1
    names = [f"w{k}" for k in range(1, s.n + 1)] + [f"~w{k}" for k in range(1, s.n + 1)]
    rep.say(f"order {N}; center z = ({', '.join(map(str, ts.z0))}), w = ({', '.join(map(str, ts.w0))})")
    for beta, k, c in ts.items():
        b = ",".join(map(str, beta))
        rep.say(f"  {names[k]}[{b}] = {c}")
        rep.put(f"coef.{names[k]}.{b}", c)
    rep.say(f"residual vanishes through degree {D}")
    rep.put("order", N)
    rep.put("residual_degree", D)
    return rep


COMMANDS = {
    "check": cmd_check,
    "verify": cmd_verify,
    "wronskian-report": cmd_wronskian,
    "synthesize pfaffian": cmd_pfaffian,
    "synthesize spectral": cmd_spectral,
    "series": cmd_series,
}


def run_command(cmd: str, path: str, args) -> Report:
    sf = load(path)
    hints = sf.hints
    if getattr(args, "hints", None):
        with open(args.hints, encoding="utf-8") as fh:
            hints = hints.merge(parse_hints(fh.read()))
    return COMMANDS[cmd](sf, args, hints)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rdiffsys", description="Integrals of R-differentiable systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file")
        sp.add_argument("--deg-bound", type=int, default=None, help="ansatz degree bound (default 2)")
        sp.add_argument("--profile", help="allowed variables, e.g. 'z1, ~w2'")
        sp.add_argument("--role", choices=("first", "partial", "multiplier"))
        sp.add_argument("--candidate", help="candidate block name (default: the first)")
        sp.add_argument("--zeta", type=int, help="distinguished operator, 1-based")
        sp.add_argument("--order", type=int, help="series truncation order")
        sp.add_argument("--hints", help="file of extra 'hint' statements")
        sp.add_argument("--allow-float-discovery", action="store_true")

    for name in ("check", "verify", "wronskian-report", "series"):
        common(sub.add_parser(name))
    syn = sub.add_parser("synthesize")
    ssub = syn.add_subparsers(dest="method", required=True)
    for name in ("pfaffian", "spectral"):
        common(ssub.add_parser(name))
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cmd = args.command if args.command != "synthesize" else f"synthesize {args.method}"
    try:
        rep = run_command(cmd, args.file, args)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RDiffError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(rep.render())
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())

