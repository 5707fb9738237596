"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 numerical failure
(degeneracy, exceptional point, non-convergence, ...).
"""

import argparse
import os
import sys

import numpy as np

from . import __version__
from .composite import tensor_observable, tensor_systems
from .dynamics import evolve
from .exceptions import BiorthoError, NumericalError
from .io import FileFormatError, Report, inputs_digest, read_matrix, read_state
from .observables import (
    deformed_pauli,
    expectation_pure,
    observable_from_ambient,
    thermal_state,
    von_neumann_entropy,
)
from .perturbation import first_order, richardson_validate
from .probability import bloch_state, probabilities
from .pt import (
    FAMILIES,
    c_operator,
    metric_from_eigs,
    parity_operator,
    phase_scan,
    pt_check,
    pt_eigenstate_check,
)
from .system import DEFAULT_TOLERANCES, build_system, components, petermann_factor, state_from_coeffs
from .young import young_truncation

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _diag(f"{self.prog}: {message}")
        raise SystemExit(1)


def _diag(msg):
    color = sys.stderr.isatty() and "NO_COLOR" not in os.environ
    prefix = "\033[31merror:\033[0m " if color else "error: "
    print(prefix + msg, file=sys.stderr)


class _Context:
    """Collects input bytes for the report digest and builds systems."""

    def __init__(self, args):
        self.args = args
        self.chunks = []
        self.tolerances = dict(DEFAULT_TOLERANCES)
        if args.tol is not None:
            self.tolerances["eig_tol"] = args.tol

    def matrix(self, path=None, gamma=None, what="--input"):
        if path is not None:
            mf, raw = read_matrix(path, with_bytes=True)
            self.chunks.append(raw)
            return mf.matrix
        if gamma is not None:
            return FAMILIES["sx-igz"](gamma)
        raise UsageError(f"{what} PATH or --gamma X is required")

    def hamiltonian(self):
        return self.matrix(self.args.input, self.args.gamma)

    def system(self, K):
        return build_system(K, **self.tolerances)

    def state(self, sys_):
        a = self.args
        if a.state is not None:
            sf, raw = read_state(a.state, with_bytes=True)
            self.chunks.append(raw)
            if sf.dim != sys_.dim:
                raise UsageError(f"state has dim {sf.dim}, system has dim {sys_.dim}")
            if sf.basis == "ambient":
                return components(sys_, sf.coeffs)
            return state_from_coeffs(sys_, sf.coeffs)
        if a.theta is not None:
            return bloch_state(sys_, a.theta, a.phi or 0.0)
        raise UsageError("--state PATH or --theta/--phi is required")


def _mode(sys_, mode):
    n = 0 if mode is None else mode
    if not 0 <= n < sys_.dim:
        raise UsageError(f"--mode {n} out of range for dim {sys_.dim}")
    return n


def cmd_eigsys(ctx):
    s = ctx.system(ctx.hamiltonian())
    return {
        "dim": s.dim,
        "gauge": s.gauge,
        "kappa": s.kappa,
        "phi": np.asarray(s.phi).T,
        "chi": np.asarray(s.chi).T,
        "biortho_defect": s.biortho_defect,
        "spectrum_real": s.spectrum_real,
        "petermann": [petermann_factor(s, n) for n in range(s.dim)],
    }


def cmd_probs(ctx):
    s = ctx.system(ctx.hamiltonian())
    psi = ctx.state(s)
    return {"coeffs": psi.coeffs, "probabilities": probabilities(s, psi)}


def cmd_expect(ctx):
    s = ctx.system(ctx.hamiltonian())
    psi = ctx.state(s)
    if ctx.args.observable is not None:
        F = ctx.matrix(ctx.args.observable, what="--observable")
        return {"expectation": expectation_pure(observable_from_ambient(s, F), psi)}
    vals = [expectation_pure(p, psi).real for p in deformed_pauli(s)]
    return {"sigma_x": vals[0], "sigma_y": vals[1], "sigma_z": vals[2]}


def cmd_evolve(ctx):
    if ctx.args.time is None:
        raise UsageError("--time X is required")
    s = ctx.system(ctx.hamiltonian())
    psi = ctx.state(s)
    out = evolve(s, psi, ctx.args.time)
    return {"time": ctx.args.time, "coeffs": out.coeffs, "ambient": out.ambient(), "norm": out.norm2()}


def cmd_thermal(ctx):
    if ctx.args.beta is None:
        raise UsageError("--beta X is required")
    s = ctx.system(ctx.hamiltonian())
    rho = thermal_state(s, ctx.args.beta)
    return {
        "beta": ctx.args.beta,
        "kappa": s.kappa.real,
        "weights": np.diag(rho.rho).real,
        "entropy": von_neumann_entropy(rho),
    }


def cmd_perturb(ctx):
    K = ctx.hamiltonian()
    if ctx.args.perturbation is not None:
        Kp = ctx.matrix(ctx.args.perturbation, what="--perturbation")
    elif K.shape == (2, 2):
        Kp = np.diag([1.0, -1.0]).astype(complex)
    else:
        raise UsageError("--perturbation PATH is required for dim != 2")
    s = ctx.system(K)
    n = _mode(s, ctx.args.mode)
    res = first_order(s, Kp, n)
    out = {
        "mode": n,
        "kappa": s.kappa[n],
        "mu1": res.mu1,
        "psi1_coeffs": res.psi1_coeffs,
        "epsilon_validity": res.epsilon_validity,
    }
    if ctx.args.epsilon is not None:
        eps = ctx.args.epsilon
        out["epsilon"] = eps
        out["first_order_eigenvalue"] = s.kappa[n] + eps * res.mu1
        out["richardson_order"] = richardson_validate(K, Kp, n, eps, **ctx.tolerances)
    return out


def cmd_compose(ctx):
    a = ctx.args
    A = ctx.system(ctx.hamiltonian())
    if a.left is not None:
        B = ctx.system(ctx.matrix(a.left, what="--left"))
    else:
        B = A
    AB = tensor_systems(A, B)
    out = {
        "dims": [A.dim, B.dim],
        "dim": AB.dim,
        "kappa": AB.kappa,
        "biortho_defect": AB.biortho_defect,
    }
    if A.dim == B.dim == 2:
        zz = tensor_observable(deformed_pauli(A)[2], deformed_pauli(B)[2], AB)
        out["ising_zz_eigenvalues"] = np.sort(np.linalg.eigvals(zz.ambient).real)[::-1]
    return out


def cmd_ptcheck(ctx):
    K = ctx.hamiltonian()
    P = parity_operator(K.shape[0])
    ok, defect = pt_check(K, P)
    s = ctx.system(K)
    modes = pt_eigenstate_check(s, P)
    return {
        "pt_symmetric": ok,
        "defect": defect,
        "eigenstates_symmetric": modes,
        "kappa": s.kappa,
        "unbroken": bool(ok and all(modes)),
    }


def cmd_metric(ctx):
    s = ctx.system(ctx.hamiltonian())
    m = metric_from_eigs(s)
    out = {
        "gauge": s.gauge,
        "g": m.g,
        "condition_number": m.condition_number,
        "involution_defect": m.involution_defect,
        "conjugation_defect": m.conjugation_defect,
    }
    C, signs = c_operator(s, parity_operator(s.dim))
    out["c_signs"] = signs
    out["c_operator"] = C
    return out


def cmd_sweep(ctx):
    a = ctx.args
    if a.steps < 2:
        raise UsageError("--steps must be at least 2")
    if a.family not in FAMILIES:
        raise UsageError(f"unknown family {a.family!r}")
    grid = np.linspace(a.gamma_min, a.gamma_max, a.steps)
    rep = phase_scan(a.family, grid, **ctx.tolerances)
    return {
        "family": a.family,
        "grid": rep.grid,
        "classification": list(rep.classification),
        "max_imag": rep.max_imag,
        "min_overlap": rep.min_overlap,
        "transitions": [float(rep.grid[i]) for i in rep.transitions()],
    }


def cmd_young(ctx):
    n = ctx.args.n
    if n < 3:
        raise UsageError("young needs --n >= 3")
    r = young_truncation(n)
    return {"N": r.N, "biortho_defect": r.biortho_defect, "norm": r.norm, "norm_times_n_minus_1": r.norm * (n - 1)}


COMMANDS = {
    "eigsys": (cmd_eigsys, "eigenvalues, biorthonormal vectors and Petermann factors"),
    "probs": (cmd_probs, "transition probabilities of a state"),
    "expect": (cmd_expect, "expectation values (deformed Pauli triple by default)"),
    "evolve": (cmd_evolve, "evolve a state for a given time"),
    "thermal": (cmd_thermal, "canonical state weights and entropy"),
    "perturb": (cmd_perturb, "first-order perturbation of one mode"),
    "compose": (cmd_compose, "tensor product of two systems"),
    "ptcheck": (cmd_ptcheck, "PT symmetry of K and its eigenstates"),
    "metric": (cmd_metric, "metric operator and C operator"),
    "sweep": (cmd_sweep, "phase scan of a named one-parameter family"),
    "young": (cmd_young, "Young truncation norm demonstration"),
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="matrix file (JSON)")
    common.add_argument("--left", metavar="PATH", help="second factor for compose")
    common.add_argument("--state", metavar="PATH", help="state file (JSON)")
    common.add_argument("--observable", metavar="PATH", help="observable matrix file for expect")
    common.add_argument("--perturbation", metavar="PATH", help="perturbation matrix file for perturb")
    common.add_argument("--gamma", type=float, help="use sigma_x - i gamma sigma_z instead of --input")
    common.add_argument("--beta", type=float)
    common.add_argument("--time", type=float)
    common.add_argument("--epsilon", type=float)
    common.add_argument("--mode", type=int)
    common.add_argument("--theta", type=float)
    common.add_argument("--phi", type=float)
    common.add_argument("--tol", type=float, help="eigensolver residual tolerance")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", metavar="PATH", help="write report here instead of stdout")

    parser = _Parser(prog="biortho", description="Biorthogonal quantum mechanics toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_)
        if name == "sweep":
            p.add_argument("--family", default="sx-igz")
            p.add_argument("--gamma-min", type=float, default=0.0)
            p.add_argument("--gamma-max", type=float, default=2.0)
            p.add_argument("--steps", type=int, default=41)
        if name == "young":
            p.add_argument("--n", type=int, required=True)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    ctx = _Context(args)
    try:
        payload = COMMANDS[args.command][0](ctx)
    except NumericalError as exc:
        _diag(f"{type(exc).__name__}: {exc}")
        return 2
    except (UsageError, FileFormatError, OSError, BiorthoError, ValueError) as exc:
        _diag(str(exc))
        return 1
    report = Report(argv, inputs_digest([*ctx.chunks, *argv]), payload, __version__, ctx.tolerances)
    text = report.render(args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
