"""Command-line front end: ``heckekl {info,compute,verify,cache}``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from pathlib import Path

from . import hecke, parabolic
from .coxeter import (
    DEFAULT_WJ_CAP,
    CoxeterSystem,
    GeneralizedCartanMatrix,
    bruhat_interval_below,
    bruhat_leq,
    build_system,
    cartan_preset,
    elements_up_to_length,
    is_min_coset_rep,
    longest_element_WJ,
)
from .errors import (
    CacheHeaderMismatch,
    ConfigurationInvalid,
    CorruptCache,
    HeckeKLError,
    MalformedCartan,
    NotMinCosetRep,
    ParabolicInfinite,
)
from .verify import SUITES, SuiteConfig, run_suite

CACHE_VERSION = 1
VARIANTS = ("P", "Q", "P-parabolic", "Q-parabolic")


# -- system loading ---------------------------------------------------------------


def load_cartan_file(path: str | Path) -> GeneralizedCartanMatrix:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCartan(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict) or "cartan" not in data:
        raise MalformedCartan(f"{path}: expected an object with 'rank' and 'cartan' keys")
    rows = data["cartan"]
    if "rank" in data and data["rank"] != len(rows):
        raise MalformedCartan(f"{path}: rank {data['rank']} does not match {len(rows)} rows")
    try:
        return GeneralizedCartanMatrix.from_rows(rows)
    except MalformedCartan as exc:
        raise MalformedCartan(f"{path}: {exc}") from None


def load_system(args) -> tuple[CoxeterSystem, str]:
    if getattr(args, "cartan_file", None):
        cartan = load_cartan_file(args.cartan_file)
        label = str(args.cartan_file)
    elif getattr(args, "type", None):
        cartan = cartan_preset(args.type)
        label = args.type
    else:
        raise ConfigurationInvalid("give --type or --cartan-file")
    system = build_system(cartan)
    if not system.symmetrizable:
        print("warning: Cartan matrix is not symmetrizable; the geometric positivity "
              "theorems assume a symmetrizable Kac-Moody algebra", file=sys.stderr)
    return system, label


def parse_J(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    return tuple(sorted({int(tok) for tok in text.split(",") if tok.strip()}))


# -- info ---------------------------------------------------------------------------


def cmd_info(args) -> int:
    system, label = load_system(args)
    J = parse_J(args.J)
    for jj in J:
        system._check_index(jj)
    out = {
        "system": label,
        "rank": system.rank,
        "cartan": [list(r) for r in system.cartan.entries],
        "coxeter_matrix": [[0 if m == math.inf else m for m in row] for row in system.coxeter_matrix],
        "symmetrizable": system.symmetrizable,
    }
    try:
        w0 = longest_element_WJ(system, range(system.rank), args.wj_cap)
        out["W_finite"] = True
        out["longest_element"] = w0.word_str()
    except ParabolicInfinite:
        out["W_finite"] = False
    if J:
        out["J"] = list(J)
        try:
            wJ = longest_element_WJ(system, J, args.wj_cap)
            out["W_J_finite"] = True
            out["w_J"] = wJ.word_str()
        except ParabolicInfinite:
            out["W_J_finite"] = False
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0


# -- compute ------------------------------------------------------------------------


def _poly_json(p):
    return None if p is None else p.to_json()


def _record(y, w, variant, poly, flag=None) -> dict:
    rec = {"y": y.word_str(), "w": w.word_str(), "ly": y.length, "lw": w.length,
           "variant": variant, "poly": _poly_json(poly)}
    if flag:
        rec["flag"] = flag
    return rec


def _record_key(rec) -> tuple:
    def word(s):
        return tuple(int(t) for t in s.split(",")) if s else ()
    return (rec["lw"], word(rec["w"]), rec["ly"], word(rec["y"]))


class Job:
    """Resolved compute job: system, tables and the list of (y, w) pairs."""

    def __init__(self, args):
        self.system, self.label = load_system(args)
        self.J = parse_J(args.J)
        for jj in self.J:
            self.system._check_index(jj)
        self.variant = args.variant
        self.a = args.a
        self.parabolic = self.variant.endswith("parabolic")
        if self.parabolic and self.a is None:
            raise ConfigurationInvalid(f"variant {self.variant} needs --a q or --a -1")
        self.table = hecke.KLTable(self.system)
        if self.parabolic:
            self.ctx = parabolic.ParabolicContext.make(self.system, self.J, self.a)
            self.ptable = parabolic.ParabolicKLTable(self.ctx)

    def header(self) -> dict:
        return {
            "gcm": [list(r) for r in self.system.cartan.entries],
            "J": list(self.J) if self.parabolic else [],
            "a": self.a if self.parabolic else None,
            "variant": self.variant,
            "version": CACHE_VERSION,
        }

    def _below(self, w):
        if self.parabolic:
            return parabolic.interval_WJ(w, self.J)
        return bruhat_interval_below(w)

    def _need_coset_rep(self, *els):
        if self.parabolic:
            for el in els:
                if not is_min_coset_rep(el, self.J):
                    raise NotMinCosetRep(f"{el.word_str() or 'e'} is not in W^J for J={list(self.J)}")

    def pairs(self, args):
        if args.pair:
            y = self.system.parse_word(args.pair[0])
            w = self.system.parse_word(args.pair[1])
            self._need_coset_rep(y, w)
            return [(y, w)]
        if args.below is not None:
            w = self.system.parse_word(args.below)
            self._need_coset_rep(w)
            return [(y, w) for y in self._below(w)]
        if args.max_length is not None:
            out = []
            for layer in elements_up_to_length(self.system, args.max_length):
                for w in layer:
                    if self.parabolic and not is_min_coset_rep(w, self.J):
                        continue
                    out.extend((y, w) for y in self._below(w))
            return out
        raise ConfigurationInvalid("give one of --pair, --below or --max-length")

    def compute(self, y, w) -> dict:
        if not bruhat_leq(y, w):
            return _record(y, w, self.variant, None, flag="NotComparable")
        if self.variant == "P":
            p = self.table.get_P(y, w)
        elif self.variant == "Q":
            p = hecke.inverse_kl(self.table, y, w)
        elif self.variant == "P-parabolic":
            p = self.ptable.get_P(y, w)
        else:
            p = parabolic.parabolic_inverse_kl(self.ptable, y, w)
        return _record(y, w, self.variant, p)


def _json_lines(records: list[dict]) -> str:
    # a JSON array with one record per line
    if not records:
        return "[]\n"
    return "[\n" + ",\n".join(json.dumps(r, sort_keys=True) for r in records) + "\n]\n"


def _checksum(entries) -> str:
    blob = json.dumps(entries, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def cache_dumps(header: dict, entries: list[dict]) -> str:
    entries = sorted(entries, key=_record_key)
    head = dict(header)
    head["checksum"] = _checksum(entries)
    return ('{"header": ' + json.dumps(head, sort_keys=True) + ',\n"entries": '
            + _json_lines(entries) + "}\n")


def cache_loads(text: str, expected_header: dict | None = None) -> tuple[dict, list[dict]]:
    """Parse a cache file, validating the checksum and (optionally) the header."""
    try:
        data = json.loads(text)
        header = data["header"]
        entries = data["entries"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CorruptCache(f"unreadable cache: {exc}") from None
    if header.get("checksum") != _checksum(entries):
        raise CorruptCache("cache checksum does not match its entries")
    if expected_header is not None:
        for key, value in expected_header.items():
            if header.get(key) != value:
                raise CacheHeaderMismatch(
                    f"cache header field {key!r} is {header.get(key)!r}, job needs {value!r}"
                )
    return header, entries


def cache_store(path: str | Path, header: dict, entries: list[dict]):
    Path(path).write_text(cache_dumps(header, entries), encoding="utf-8")


def cache_load(path: str | Path, expected_header: dict | None = None):
    return cache_loads(Path(path).read_text(encoding="utf-8"), expected_header)


def run_compute(args) -> list[dict]:
    job = Job(args)
    pairs = job.pairs(args)
    cached: dict[tuple, dict] = {}
    cache_path = Path(args.cache) if args.cache else None
    if cache_path is not None and cache_path.exists():
        _, entries = cache_load(cache_path, job.header())
        cached = {(r["y"], r["w"]): r for r in entries}
    records = []
    fresh = []
    for y, w in pairs:
        key = (y.word_str(), w.word_str())
        rec = cached.get(key)
        if rec is None:
            rec = job.compute(y, w)
            fresh.append(rec)
        records.append(rec)
    if cache_path is not None:
        merged = dict(cached)
        for rec in fresh:
            merged[(rec["y"], rec["w"])] = rec
        cache_store(cache_path, job.header(), list(merged.values()))
    records.sort(key=_record_key)
    return records


def format_records(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return _json_lines(records)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["y", "w", "ly", "lw", "variant", "min", "coeffs", "flag"])
    for r in records:
        poly = r["poly"]
        writer.writerow([
            r["y"], r["w"], r["ly"], r["lw"], r["variant"],
            "" if poly is None else poly["min"],
            "" if poly is None else " ".join(map(str, poly["coeffs"])),
            r.get("flag", ""),
        ])
    return buf.getvalue()


def parse_csv_records(text: str) -> list[dict]:
    """Inverse of the CSV emission, for round-trip comparisons."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        rec = {"y": row["y"], "w": row["w"], "ly": int(row["ly"]), "lw": int(row["lw"]),
               "variant": row["variant"], "poly": None}
        if row["min"] != "":
            coeffs = [int(c) for c in row["coeffs"].split()] if row["coeffs"] else []
            rec["poly"] = {"min": int(row["min"]), "coeffs": coeffs}
        if row["flag"]:
            rec["flag"] = row["flag"]
        out.append(rec)
    return out


def cmd_compute(args) -> int:
    sys.stdout.write(format_records(run_compute(args), args.format))
    return 0


# -- verify / cache -------------------------------------------------------------------


def cmd_verify(args) -> int:
    system, label = load_system(args)
    config = SuiteConfig(system, label, parse_J(args.J), args.a, args.max_length, args.wj_cap)
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    reports = [run_suite(name, config) for name in names]
    if len(reports) == 1:
        sys.stdout.write(reports[0].dumps() + "\n")
    else:
        sys.stdout.write(json.dumps([r.to_json() for r in reports], sort_keys=True, indent=2) + "\n")
    for r in reports:
        print(f"{r.suite}: {r.passed}/{r.attempted} passed", file=sys.stderr)
    return 0 if all(r.ok for r in reports) else 1


def cmd_cache(args) -> int:
    header, entries = cache_load(args.path)
    counts: dict[str, int] = {}
    for r in entries:
        counts[r["variant"]] = counts.get(r["variant"], 0) + 1
    print(json.dumps({"header": header, "entries": len(entries), "by_variant": counts},
                     sort_keys=True, indent=2))
    return 0


# -- argument parsing -------------------------------------------------------------------


def _add_system_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--type", help="preset: An, Bn, Cn, Dn, G2, A1~, A2~, ...")
    g.add_argument("--cartan-file", help='JSON file {"rank": n, "cartan": [[...], ...]}')
    p.add_argument("--J", default="", help="comma-separated generator indices")
    p.add_argument("--wj-cap", type=int, default=DEFAULT_WJ_CAP,
                   help="element cap when testing finiteness of W_J")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heckekl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="summarize a Cartan matrix and its Weyl group")
    _add_system_args(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("compute", help="emit polynomial tables")
    _add_system_args(p)
    p.add_argument("--a", choices=["q", "-1"], help="module marker; required for parabolic variants")
    p.add_argument("--variant", choices=VARIANTS, default="P")
    scope = p.add_mutually_exclusive_group(required=True)
    scope.add_argument("--pair", nargs=2, metavar=("Y", "W"), help='one pair; words like "1,0,2" ("" is e)')
    scope.add_argument("--below", metavar="W", help="all y <= W")
    scope.add_argument("--max-length", type=int, help="all pairs with l(w) <= L")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--cache", metavar="PATH", help="reuse and extend a table cache")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run an identity suite")
    _add_system_args(p)
    p.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    p.add_argument("--a", choices=["q", "-1"], help="module marker (default: both)")
    p.add_argument("--max-length", type=int, help="length bound (default: all of a finite W)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cache", help="inspect a cache file")
    p.add_argument("path")
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HeckeKLError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
