"""The ``eulerweft`` command line.

Verb-noun subcommands over the library: ``circuit``, ``graph``, ``eval``,
``ising``, ``sim`` and ``corpus``.  Every command builds a plain dict; text
mode prints it as ``key: value`` lines (floats via repr) and JSON mode dumps
it with sorted keys, so a fixed seed gives byte-identical output.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 cap or budget hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable, Sequence

from . import __version__, corpus
from .circuit import (CircuitMatrix, GateForm, GateSpec, ch_matrix, decision_wrap, format_circuit,
                      gate_angle, read_circuit, to_gate_ops, validate)
from .enumerators import (QwgtInstance, default_workers, eulerian_genfunc,
                          multivariate_genfunc, qwgt_table, signed_genfunc)
from .errors import BudgetExhausted, CapExceeded, EulerweftError
from .gf2 import DEFAULT_CAP, kernel_basis, read_matrix
from .graphs import (LiftChoice, count_euler_lifts, default_choice, euler_condition_exhaustive,
                     euler_condition_poly, find_euler_circuit, format_graph, graph_from_circuit,
                     incidence_matrix, lift_to_circuit, read_graph)
from .ising import (max_relative_deviation, partition_all, partition_direct, partition_qwgt,
                    partition_vdw, read_instance)
from .simulator import (amplitude_via_expansion, amplitude_zero, decision_marginal,
                        hadamard_test, run_decision)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# output

def _flatten(payload: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(payload, dict) and payload:
        out = []
        for k in sorted(payload):
            out += _flatten(payload[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    return [(prefix, payload)]


def _scalar(v: Any) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, ensure_ascii=False)
    return json.dumps(v) if v is None or isinstance(v, bool) else str(v)


def render(payload: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if "text" in payload and isinstance(payload["text"], str) and len(payload) == 1:
        return payload["text"]
    return "".join(f"{k}: {_scalar(v)}\n" for k, v in _flatten(payload))


def parse_text_output(text: str) -> dict[str, Any]:
    """Inverse of text mode: dotted keys back to nested dicts, values via JSON."""
    out: dict[str, Any] = {}
    for line in text.splitlines():
        key, _, raw = line.partition(": ")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = out
        parts = key.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
        node[parts[-1]] = value
    return out


# shared argument helpers

def _cap(args) -> int | None:
    return None if args.cap_override else args.cap


def _workers(args) -> int:
    return args.threads if args.threads else default_workers()


def _form(args) -> GateForm:
    return GateForm(args.form)


def _spec(args) -> GateSpec:
    return GateSpec.from_lambda(args.lam, _form(args))


def _csv_floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


# circuit

def cmd_circuit_validate(args) -> tuple[dict, int]:
    rep = validate(read_circuit(args.h), graph_restricted=args.graph_restricted)
    ok = rep.graph_restricted if args.graph_restricted else rep.valid
    return rep.as_dict(), 0 if ok else 2


def cmd_circuit_show(args) -> dict:
    c = read_circuit(args.h)
    theta = gate_angle(args.lam, _form(args)) if args.lam is not None else None
    gates = [{"index": k + 1, "pauli_string": w.tensor_str(), "angle": theta}
             for k, w in enumerate(c.words)]
    return {"qubits": c.n, "gates": gates}


def cmd_circuit_angle(args) -> dict:
    return {"lambda": args.lam, "form": args.form, "theta": gate_angle(args.lam, _form(args))}


# graph

def _circuit_payload(c: CircuitMatrix) -> dict:
    return {"qubits": c.n, "gates": c.N, "words": [str(w) for w in c.words], "h": c.h.to_lists()}


def cmd_graph_to_circuit(args) -> dict:
    g = read_graph(args.graph)
    if args.y:
        pos = [int(t) - 1 for t in args.y.split(",")]
        choice = LiftChoice.from_positions(pos)
    else:
        choice = default_choice(g)
    c = lift_to_circuit(g, choice)
    if args.output == "text":
        return {"text": format_circuit(c)}
    return _circuit_payload(c)


def cmd_graph_from_circuit(args) -> dict:
    g = graph_from_circuit(read_circuit(args.h), keep_isolated=args.keep_isolated)
    if args.output == "text":
        inc = incidence_matrix(g)
        return {"text": format_graph(g) + "# incidence\n" + str(inc) + "\n"}
    return {
        "vertex_count": g.vertex_count,
        "edges": [[v + 1 for v in e] for e in g.edges],
        "incidence": incidence_matrix(g).to_lists(),
    }


def cmd_graph_euler_check(args) -> tuple[dict, int]:
    c = read_circuit(args.h)
    rep = validate(c)
    if not rep.valid:
        return rep.as_dict(), 2
    poly = euler_condition_poly(c)
    out = {"kernel_dimension": kernel_basis(ch_matrix(c)).free_count, "euler_condition": poly}
    if args.exhaustive:
        out["exhaustive"] = euler_condition_exhaustive(c, _cap(args))
    return out, 0


def cmd_graph_euler_search(args) -> dict:
    g = read_graph(args.graph)
    c = find_euler_circuit(g, args.strategy, budget=args.budget, seed=args.seed, z_cap=args.z_cap)
    out: dict[str, Any] = {"strategy": args.strategy, "found": c is not None}
    if args.strategy == "linear":
        out["lift_count"] = count_euler_lifts(g)
    if c is not None:
        out.update(_circuit_payload(c))
    return out


# eval

def _poly_payload(poly, lam: float | None) -> dict:
    value = {"lambda": lam, "value": float(poly(lam))} if lam is not None else None
    return {"coeffs": list(poly.trimmed()) or [0], "value_at": value}


def cmd_eval_qwgt(args) -> dict:
    a = read_matrix(args.a)
    b = read_matrix(args.b)
    table = qwgt_table(QwgtInstance(a, b, args.x, args.y), _cap(args), _workers(args))
    return {"coeffs": list(table.coeffs),
            "value_at": {"x": args.x, "y": args.y, "value": float(table.evaluate_xy(args.x, args.y))}}


def cmd_eval_e(args) -> dict:
    return _poly_payload(eulerian_genfunc(read_graph(args.graph), _cap(args), _workers(args)), args.lam)


def cmd_eval_eprime(args) -> dict:
    return _poly_payload(signed_genfunc(read_circuit(args.h), _cap(args), _workers(args)), args.lam)


def cmd_eval_multi(args) -> dict:
    g = read_graph(args.graph)
    w = _csv_floats(args.weights)
    return {"weights": w, "value": multivariate_genfunc(g, w, _cap(args))}


# ising

_ISING = {"direct": lambda i, cap: partition_direct(i),
          "vdw": partition_vdw, "qwgt": partition_qwgt}


def cmd_ising(args) -> dict:
    inst = read_instance(args.instance)
    cap = _cap(args)
    if args.method == "all":
        values = partition_all(inst, cap)
    else:
        values = {args.method: _ISING[args.method](inst, cap)}
    return {"Z": values, "max_relative_deviation": max_relative_deviation(values.values())}


# sim

def _sim_circuit(args) -> tuple[CircuitMatrix, GateSpec]:
    return read_circuit(args.h), _spec(args)


def _amp_payload(c: CircuitMatrix, g: GateSpec, amp: float, lam: float, form: str) -> dict:
    scale = g.gamma ** c.N
    return {"lambda": lam, "form": form, "amplitude": amp, "scale": scale,
            "scaled_amplitude": amp * scale}


def cmd_sim_amplitude(args) -> dict:
    c, g = _sim_circuit(args)
    return _amp_payload(c, g, amplitude_zero(c, g), args.lam, args.form)


def cmd_sim_expansion(args) -> dict:
    c, g = _sim_circuit(args)
    return _amp_payload(c, g, amplitude_via_expansion(c, g, _cap(args), _workers(args)),
                        args.lam, args.form)


def cmd_sim_hadamard(args) -> dict:
    c, g = _sim_circuit(args)
    res = hadamard_test(c, g, epsilon=args.epsilon, delta=args.delta, seed=args.seed)
    out = res.as_dict()
    out["exact"] = amplitude_zero(c, g)
    return out


def cmd_sim_decision(args) -> dict:
    c, g = _sim_circuit(args)
    q = args.decision_qubit - 1
    ops = to_gate_ops(c, g)
    res = run_decision(decision_wrap(ops, c.n, q), c.n + 1)
    m0, m1 = decision_marginal(ops, c.n, q)
    out = res.as_dict()
    out["decision_qubit"] = args.decision_qubit
    out["marginal"] = {"p0": m0, "p1": m1}
    return out


# corpus

def cmd_corpus_list(args) -> dict:
    return {"fixtures": {n: corpus.files(n) for n in corpus.names()}}


def cmd_corpus_show(args) -> dict:
    if args.output == "text":
        return {"text": corpus.read_text(args.name)}
    return {"name": args.name, "files": corpus.files(args.name),
            "input": corpus.read_text(args.name), "expected": corpus.expected(args.name)}


def cmd_corpus_export(args) -> dict:
    targets = corpus.names() if args.name == "all" else [args.name]
    paths = []
    for n in targets:
        paths += [str(p) for p in corpus.export(n, args.directory)]
    return {"written": paths}


# parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: $EULERWEFT_THREADS or all cores)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                   help="largest kernel dimension enumerated without --cap-override")
    p.add_argument("--cap-override", action="store_true",
                   help="allow exponential enumeration beyond --cap")
    return p


def _lam_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--lambda", dest="lam", type=float, required=required)
    p.add_argument("--form", choices=("paper", "edge"), default="edge")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    root = _Parser(prog="eulerweft", description="Eulerian-subgraph circuits and enumerators")
    root.add_argument("--version", action="version", version=f"eulerweft {__version__}")
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def verb(sub, name: str, func: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    sub = groups.add_parser("circuit", help="H-matrix circuits").add_subparsers(dest="verb", required=True)
    p = verb(sub, "validate", cmd_circuit_validate, "check the column rules")
    p.add_argument("h")
    p.add_argument("--graph-restricted", action="store_true")
    p = verb(sub, "show", cmd_circuit_show, "list the gates")
    p.add_argument("h")
    _lam_args(p, required=False)
    p = verb(sub, "angle", cmd_circuit_angle, "rotation angle for a lambda")
    _lam_args(p)

    sub = groups.add_parser("graph", help="graphs and lifts").add_subparsers(dest="verb", required=True)
    p = verb(sub, "to-circuit", cmd_graph_to_circuit, "lift a graph to an H-matrix")
    p.add_argument("graph")
    p.add_argument("--y", help="comma-separated 1-based Y vertex per edge (default: first endpoint)")
    p = verb(sub, "from-circuit", cmd_graph_from_circuit, "read the graph off an H-matrix")
    p.add_argument("h")
    p.add_argument("--keep-isolated", action="store_true")
    p = verb(sub, "euler-check", cmd_graph_euler_check, "test the Euler condition")
    p.add_argument("h")
    p.add_argument("--exhaustive", action="store_true", help="also scan the kernel")
    p = verb(sub, "euler-search", cmd_graph_euler_search, "search for an Euler-satisfying lift")
    p.add_argument("graph")
    p.add_argument("--strategy", choices=("exhaustive", "randomized", "linear"), default="exhaustive")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--z-cap", type=int, default=2)

    sub = groups.add_parser("eval", help="exact enumerators").add_subparsers(dest="verb", required=True)
    p = verb(sub, "qwgt", cmd_eval_qwgt, "S(A, B, x, y)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--y", type=float, default=1.0)
    p = verb(sub, "e", cmd_eval_e, "Eulerian generating function of a graph")
    p.add_argument("graph")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p = verb(sub, "eprime", cmd_eval_eprime, "signed generating function of a circuit")
    p.add_argument("h")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p = verb(sub, "multi", cmd_eval_multi, "edge-weighted Eulerian sum")
    p.add_argument("graph")
    p.add_argument("--weights", required=True, help="comma-separated weight per edge")

    sub = groups.add_parser("ising", help="partition functions").add_subparsers(dest="verb", required=True)
    for method in ("direct", "vdw", "qwgt", "all"):
        p = verb(sub, method, cmd_ising, f"partition function ({method})")
        p.add_argument("instance")
        p.set_defaults(method=method)

    sub = groups.add_parser("sim", help="statevector simulation").add_subparsers(dest="verb", required=True)
    for name, func in (("amplitude", cmd_sim_amplitude), ("expansion", cmd_sim_expansion),
                       ("hadamard", cmd_sim_hadamard), ("decision", cmd_sim_decision)):
        p = verb(sub, name, func, f"vacuum amplitude ({name})")
        p.add_argument("h")
        _lam_args(p)
        if name == "hadamard":
            p.add_argument("--epsilon", type=float, default=0.05)
            p.add_argument("--delta", type=float, default=0.05)
            p.add_argument("--seed", type=int, default=None)
        if name == "decision":
            p.add_argument("--decision-qubit", type=int, default=1, help="1-based")

    sub = groups.add_parser("corpus", help="bundled fixtures").add_subparsers(dest="verb", required=True)
    verb(sub, "list", cmd_corpus_list, "list fixtures")
    p = verb(sub, "show", cmd_corpus_show, "print a fixture")
    p.add_argument("name", choices=corpus.names())
    p = verb(sub, "export", cmd_corpus_export, "copy fixtures to a directory")
    p.add_argument("name", choices=corpus.names() + ["all"])
    p.add_argument("directory")
    return root


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    try:
        result = args.func(args)
    except (CapExceeded, BudgetExhausted) as exc:
        print(f"eulerweft: {exc}", file=sys.stderr)
        return 3
    except (EulerweftError, ValueError, OSError, IndexError) as exc:
        print(f"eulerweft: {exc}", file=sys.stderr)
        return 2
    payload, code = result if isinstance(result, tuple) else (result, 0)
    sys.stdout.write(render(payload, args.output))
    return code


if __name__ == "__main__":
    sys.exit(main())
