"""Command-line interface: ``czl <command> [options]``.

Arrays are written ``s1,...,sr;e1,...,er`` with characters as exponents of the
field generator (``2,1;0,1``); the character part may be omitted when trivial.
Every command prints JSON (``--format json``, the default) or a plain text
summary.  Exit codes: 0 success, 1 verification failure, 2 usage error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .compositions import (all_arrays, count_d, count_s, count_t, enum_AJ1, enum_AS, enum_AT,
                           enum_J, enum_Jprime, enum_S, format_array, format_tuple, parse_array)
from .errors import CzlError, MalformedInput
from .field import SUPPORTED_Q, field
from .relfinder import (DEFAULT_B, DEFAULT_N, MAX_PRECISION, dimension_certificate,
                        search_by_character, search_relations, value_id, verify_certificate)
from .values import family_name

DEFAULT_Q = 3
DEFAULT_WEIGHT = 6
_FAMILIES = ("mzv", "amzv", "cmpl", "acmpl")


@dataclass
class Config:
    q: int = DEFAULT_Q
    precision: int = DEFAULT_N
    degree_bound: int = DEFAULT_B
    weight: int = None
    family: str = "acmpl"
    format: str = "json"
    threads: int = 1
    seed: int = 0

    @classmethod
    def from_args(cls, args):
        cfg = cls(args.q, args.precision, args.degree_bound, args.weight, args.family,
                  args.format, args.threads, args.seed)
        if cfg.q not in SUPPORTED_Q:
            raise MalformedInput(f"q={cfg.q} unsupported; choose one of {SUPPORTED_Q}")
        if cfg.precision < 1 or cfg.degree_bound < 0 or cfg.threads < 1:
            raise MalformedInput("precision and threads must be >= 1, degree bound >= 0")
        return cfg

    @property
    def series_family(self):
        return family_name(self.family)


# -- output helpers

def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _emit(cfg, obj, text_lines):
    if cfg.format == "json":
        print(_dump(obj))
    else:
        for line in text_lines:
            print(line)


def _val(v):
    return "inf" if v == float("inf") else int(v)


def _pool_map(cfg, fn, items):
    """Map over items in input order, in worker processes when --threads > 1."""
    items = list(items)
    if cfg.threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(fn, items))


def _arrays(cfg, texts):
    out = [parse_array(t, cfg.q) for t in texts]
    if cfg.family in ("mzv", "cmpl"):
        for a in out:
            if not a.is_trivial():
                raise MalformedInput(f"{cfg.family} takes trivial characters, got {format_array(a)}")
    return out


def _need_weight(cfg):
    if cfg.weight is None:
        raise MalformedInput("--weight is required")
    if cfg.weight < 1:
        raise MalformedInput("--weight must be positive")
    return cfg.weight


# -- commands

def cmd_dims(cfg, args):
    q = cfg.q
    rows = []
    for w in range(1, args.max_weight + 1):
        row = {"w": w, "d": count_d(w, q), "s": count_s(w, q), "t": count_t(w, q)}
        if args.check:
            row["brute"] = {"d": len(enum_S(w, q)), "s": len(enum_AS(w, q)), "t": len(enum_AT(w, q))}
        rows.append(row)
    ok = all(r["brute"] == {k: r[k] for k in "dst"} for r in rows) if args.check else True
    lines = ["w\td\ts\tt" + ("\tcheck" if args.check else "")]
    for r in rows:
        extra = ("\tok" if r["brute"] == {k: r[k] for k in "dst"} else "\tMISMATCH") if args.check else ""
        lines.append(f"{r['w']}\t{r['d']}\t{r['s']}\t{r['t']}{extra}")
    _emit(cfg, {"schema": "czl-1", "kind": "dims", "q": q, "rows": rows}, lines)
    return 0 if ok else 1


_BASES = {"AT": enum_AT, "AS": enum_AS, "S": enum_S, "AT1": enum_AJ1,
          "J": enum_J, "Jprime": enum_Jprime}


def cmd_enum(cfg, args):
    w = _need_weight(cfg)
    items = _BASES[args.basis](w, cfg.q)
    names = [format_tuple(x) if isinstance(x, tuple) else format_array(x) for x in items]
    _emit(cfg, {"schema": "czl-1", "kind": "enumeration", "q": cfg.q, "weight": w,
                "basis": args.basis, "count": len(names), "items": names},
          [f"{args.basis}_{w} (q={cfg.q}): {len(names)}"] + names)
    return 0


def _eval_one(job):
    q, text, family, N = job
    from .values import nested_sum
    v = nested_sum(q, parse_array(text, q), family, N)
    return {"array": text, "family": family, "precision": N, **v.to_json()}


def cmd_eval(cfg, args):
    arrays = _arrays(cfg, args.arrays)
    jobs = [(cfg.q, format_array(a), cfg.series_family, cfg.precision) for a in arrays]
    rows = _pool_map(cfg, _eval_one, jobs)
    lines = [f"{r['family']}({r['array']}) = [v={r['valuation']}] " + " ".join(r["coeffs"])
             for r in rows]
    _emit(cfg, {"schema": "czl-1", "kind": "values", "q": cfg.q, "values": rows}, lines)
    return 0


def _product_row(q, a, b, family, N):
    from .stuffle import value_product
    from .values import linear_combination, nested_sum
    terms = value_product(q, a, b, family)
    lhs = nested_sum(q, a, family, N) * nested_sum(q, b, family, N)
    residual = (lhs - linear_combination(q, terms, family, N)).truncate(N).valuation()
    return {"a": format_array(a), "b": format_array(b), "family": family,
            "terms": terms.to_json(), "residual_valuation": _val(residual), "precision": N}


def cmd_product(cfg, args):
    q, fam = cfg.q, cfg.series_family
    if args.random:
        rng = random.Random(cfg.seed)
        max_w = cfg.weight or DEFAULT_WEIGHT
        pool = [a for w in range(1, max_w) for a in all_arrays(w, q)]
        if cfg.family in ("mzv", "cmpl"):
            pool = [a for a in pool if a.is_trivial()]
        pairs = []
        while len(pairs) < args.random:
            a, b = rng.choice(pool), rng.choice(pool)
            if a.weight + b.weight <= max_w:
                pairs.append((a, b))
    else:
        if len(args.arrays) != 2:
            raise MalformedInput("product takes two arrays (or --random COUNT)")
        pairs = [tuple(_arrays(cfg, args.arrays))]
    rows = [_product_row(q, a, b, fam, cfg.precision) for a, b in pairs]
    lines = [f"{fam}({r['a']}) * {fam}({r['b']}): {len(r['terms'])} terms, "
             f"residual valuation {r['residual_valuation']}" for r in rows]
    if len(rows) == 1:
        lines += [f"  {t['coeff']}  {fam}({t['array']})" for t in rows[0]["terms"]]
    _emit(cfg, rows[0] if len(rows) == 1 else
          {"schema": "czl-1", "kind": "products", "q": q, "seed": cfg.seed, "products": rows}, lines)
    return 0


def _reduce_one(job):
    q, text, family, basis, N = job
    from .relations import reduce_to_AS, reduce_to_AT
    from .values import residual_valuation
    a = parse_array(text, q)
    cert = (reduce_to_AS if basis == "AS" else reduce_to_AT)(q, a, family)
    cert.residual_valuation = residual_valuation(q, a, cert.terms, family, N,
                                                 "Si" if basis == "AS" else family)
    cert.precision = N
    return cert.to_json()


def cmd_reduce(cfg, args):
    if args.arrays:
        arrays = _arrays(cfg, args.arrays)
    else:
        arrays = all_arrays(_need_weight(cfg), cfg.q)
        if cfg.family in ("mzv", "cmpl"):
            arrays = [a for a in arrays if a.is_trivial()]
    jobs = [(cfg.q, format_array(a), cfg.series_family, args.basis, cfg.precision) for a in arrays]
    certs = _pool_map(cfg, _reduce_one, jobs)
    ok = all(c["residual_valuation"] == "inf" or c["residual_valuation"] > cfg.precision for c in certs)
    lines = []
    for c in certs:
        lines.append(f"{c['family']}({c['input']}) over {c['basis']}: {len(c['terms'])} terms, "
                     f"residual valuation {c['residual_valuation']}")
        lines += [f"  {t['coeff']}  [{t['array']}]" for t in c["terms"]]
    _emit(cfg, certs[0] if len(certs) == 1 else certs, lines)
    return 0 if ok else 1


def cmd_unique_relation(cfg, args):
    from .sigma import outcome_to_json, relation_coefficients, relation_residual, solve_sigma_system
    w = _need_weight(cfg)
    out = relation_coefficients(w, cfg.q) if args.character == 0 else \
        solve_sigma_system(w, cfg.q, args.character)
    if not out.is_unique:
        doc = outcome_to_json(out)
        _emit(cfg, doc, [f"NoRelation (q={cfg.q}, w={w}): {out.reason}"])
        return 0
    v = relation_residual(cfg.q, w, out.terms, cfg.precision).valuation()
    doc = outcome_to_json(out, v, cfg.precision)
    lines = [f"pi^{w}"] + [f"  + ({t['coeff']}) Li{t['tuple']}" for t in doc["terms"]] + \
        [f"  = 0   residual valuation {doc['residual_valuation']} at N={cfg.precision}"]
    _emit(cfg, doc, lines)
    return 0 if v > cfg.precision else 1


def _relation_ids(cfg, args):
    if args.values:
        return list(args.values)
    w = _need_weight(cfg)
    kind = "Si" if cfg.series_family == "Si" else "S"
    arrays = {"AS": enum_AS, "S": enum_S, "AT1": enum_AJ1, "AT": enum_AT}[args.basis](w, cfg.q)
    ids = [value_id(kind, a) for a in arrays]
    if args.with_pi:
        ids.insert(0, value_id("pi", w=w))
    return ids


def cmd_find_relations(cfg, args):
    ids = _relation_ids(cfg, args)
    if args.by_character:
        blocks = search_by_character(cfg.q, ids, cfg.degree_bound, cfg.precision, args.max_precision)
    else:
        blocks = {None: search_relations(cfg.q, ids, cfg.degree_bound, cfg.precision, args.max_precision)}
    rels = [c for _, certs in sorted(blocks.items(), key=lambda kv: -1 if kv[0] is None else kv[0])
            for c in certs]
    docs = [c.to_json() for c in rels]
    lines = [f"{len(ids)} values, degree bound {cfg.degree_bound}: {len(docs)} relation(s)"]
    for d in docs:
        lines.append("  " + " + ".join(f"({c}) {v}" for c, v in zip(d["coefficients"], d["value_ids"])
                                       if c != "0") + f" = 0   [verified to {d['verified_valuation']}]")
    _emit(cfg, {"schema": "czl-1", "kind": "relations", "q": cfg.q, "value_ids": ids,
                "degree_bound": cfg.degree_bound, "relations": docs}, lines)
    return 0


def cmd_dimension(cfg, args):
    w = _need_weight(cfg)
    fam = cfg.family if cfg.family != "cmpl" else "mzv"
    cert = dimension_certificate(w, cfg.q, fam, N=cfg.precision, B=cfg.degree_bound,
                                 max_precision=args.max_precision)
    doc = cert.to_json()
    lines = [f"dim {cert.family} weight {w} (q={cfg.q}): upper {cert.upper_bound}, "
             f"lower {cert.lower_bound}, target {cert.target} -> {cert.verdict}"]
    lines += [f"  {d}" for d in cert.diagnostics]
    _emit(cfg, doc, lines)
    return 0 if cert.verdict == "confirmed" else 1


def _at_one(job):
    q, text, N = job
    from .values import at_zeta_check
    return {"array": text, "residual_valuation": _val(at_zeta_check(q, parse_array(text, q), N)),
            "precision": N}


def cmd_at_check(cfg, args):
    arrays = _arrays(cfg, args.arrays)
    rows = _pool_map(cfg, _at_one, [(cfg.q, format_array(a), cfg.precision) for a in arrays])
    ok = all(r["residual_valuation"] == "inf" or r["residual_valuation"] > cfg.precision for r in rows)
    _emit(cfg, {"schema": "czl-1", "kind": "at-check", "q": cfg.q, "checks": rows},
          [f"({r['array']}): residual valuation {r['residual_valuation']}" for r in rows])
    return 0 if ok else 1


def cmd_verify(cfg, args):
    try:
        text = sys.stdin.read() if args.certificate == "-" else open(args.certificate).read()
        doc = json.loads(text)
    except OSError as exc:
        raise MalformedInput(f"cannot read {args.certificate}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{args.certificate} is not JSON: {exc}") from exc
    docs = doc if isinstance(doc, list) else [doc]
    results = [verify_certificate(d, cfg.precision) for d in docs]
    lines = [f"{r.kind}: {'ok' if r.ok else 'FAILED'}"
             + (f", residual valuation {_val(r.residual_valuation)}" if r.residual_valuation is not None else "")
             + (f" ({r.detail})" if r.detail else "") for r in results]
    out = [r.to_json() for r in results]
    _emit(cfg, out[0] if len(out) == 1 else out, lines)
    return 0 if all(r.ok for r in results) else 1


def cmd_report(cfg, args):
    from .report import write_report
    paths = write_report(args.out, cfg.q, args.max_weight, cfg.weight or 4)
    doc = {"schema": "czl-1", "kind": "report", "q": cfg.q,
           "files": {k: str(p) for k, p in sorted(paths.items())}}
    _emit(cfg, doc, [f"{k}\t{p}" for k, p in sorted(paths.items())])
    return 0


# -- argument parsing

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=DEFAULT_Q, help="field size (default 3)")
    common.add_argument("--precision", "-N", type=int, default=DEFAULT_N,
                        help="∞-adic precision of series (default %(default)s)")
    common.add_argument("--degree-bound", "-B", type=int, default=DEFAULT_B,
                        help="coefficient degree bound for relation search (default %(default)s)")
    common.add_argument("--weight", "-w", type=int, default=None)
    common.add_argument("--family", choices=_FAMILIES, default="acmpl")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--threads", type=int, default=1, help="worker processes for per-array commands")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")

    parser = argparse.ArgumentParser(prog="czl", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("dims", cmd_dims, "table of d(w), s(w), t(w)")
    p.add_argument("--max-weight", type=int, default=DEFAULT_WEIGHT)
    p.add_argument("--check", action="store_true", help="also count the enumerated sets")

    p = add("enum", cmd_enum, "list a basis or index set of one weight")
    p.add_argument("--basis", choices=sorted(_BASES), default="AS")

    p = add("eval", cmd_eval, "series expansion of values")
    p.add_argument("arrays", nargs="+")

    p = add("product", cmd_product, "stuffle product with a numeric residual")
    p.add_argument("arrays", nargs="*")
    p.add_argument("--random", type=int, default=0, metavar="COUNT",
                   help="check COUNT random pairs of total weight <= --weight")

    p = add("reduce", cmd_reduce, "decompose values onto AT_w or AS_w")
    p.add_argument("arrays", nargs="*", help="arrays to reduce (default: every array of --weight)")
    p.add_argument("--basis", choices=("AT", "AS"), default="AS")

    p = add("unique-relation", cmd_unique_relation, "the relation between a π̃ power and polylogs")
    p.add_argument("--character", type=int, default=0, help="character exponent of the polylogs")

    p = add("find-relations", cmd_find_relations, "search for bounded-degree A-relations")
    p.add_argument("values", nargs="*", help="value ids such as pi^4, Si(2,2;0,0), S(3;1)")
    p.add_argument("--basis", choices=("AS", "S", "AT1", "AT"), default="AS",
                   help="with --weight and no ids, search among this set")
    p.add_argument("--with-pi", action="store_true", help="include the π̃ power of the weight")
    p.add_argument("--by-character", action="store_true", help="search each character block separately")
    p.add_argument("--max-precision", type=int, default=MAX_PRECISION)

    p = add("dimension", cmd_dimension, "dimension certificate for one weight")
    p.add_argument("--max-precision", type=int, default=MAX_PRECISION)

    p = add("at-check", cmd_at_check, "Anderson-Thakur identity residuals")
    p.add_argument("arrays", nargs="+")

    p = add("verify", cmd_verify, "recompute a certificate file ('-' for stdin)")
    p.add_argument("certificate")

    p = add("report", cmd_report, "write counts.tsv and PNG figures")
    p.add_argument("--out", default="czl-report")
    p.add_argument("--max-weight", type=int, default=10)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = Config.from_args(args)
        field(cfg.q)
        return args.fn(cfg, args)
    except CzlError as exc:
        print(f"czl: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, ZeroDivisionError) as exc:
        print(f"czl: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
