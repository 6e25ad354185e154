"""Plain-text witness and regime reports."""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import RegimeReport
from .errors import WitnessParseError
from .window import Witness

HEADER_KEYS = ("k", "w", "case", "ell", "r", "x", "y", "guarantee", "count")


@dataclass(frozen=True)
class ReportedWitness:
    """A witness as read back from its report: enough to re-verify it."""

    k: int
    window_size: int
    case: str
    ell: int
    r: int
    x: int
    y: int
    guarantee: int
    triple_count: int
    spanning_set: tuple[int, ...]
    triples: tuple[tuple[int, int, int], ...]


def format_witness(W: Witness) -> str:
    lines = [
        "witness",
        f"k {W.k}",
        f"w {W.window_size}",
        f"case {W.case}",
        f"ell {W.ell}",
        f"r {W.r}",
        f"x {W.x}",
        f"y {W.y}",
        f"guarantee {W.guarantee}",
        f"count {W.triple_count}",
        f"spanning {len(W.spanning_set)}",
        " ".join(map(str, W.spanning_set)),
        f"triples {len(W.triples)}",
    ]
    lines += [f"{a} {b} {ab}" for a, b, ab in W.triples]
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> ReportedWitness:
    lines = text.splitlines()
    try:
        if lines[0].strip() != "witness":
            raise WitnessParseError("missing 'witness' header")
        fields = {}
        for i, key in enumerate(HEADER_KEYS, start=1):
            name, value = lines[i].split()
            if name != key:
                raise WitnessParseError(f"expected '{key}' on line {i + 1}, got '{name}'")
            fields[key] = value
        name, size = lines[10].split()
        if name != "spanning":
            raise WitnessParseError("missing 'spanning' line")
        spanning = tuple(int(v) for v in lines[11].split())
        if len(spanning) != int(size):
            raise WitnessParseError(f"spanning set announces {size} ids, found {len(spanning)}")
        name, ntrip = lines[12].split()
        if name != "triples":
            raise WitnessParseError("missing 'triples' line")
        body = [ln for ln in lines[13:] if ln.strip()]
        if len(body) != int(ntrip):
            raise WitnessParseError(f"triples announces {ntrip} lines, found {len(body)}")
        triples = []
        for ln in body:
            a, b, ab = (int(v) for v in ln.split())
            triples.append((a, b, ab))
        return ReportedWitness(
            k=int(fields["k"]), window_size=int(fields["w"]), case=fields["case"],
            ell=int(fields["ell"]), r=int(fields["r"]), x=int(fields["x"]), y=int(fields["y"]),
            guarantee=int(fields["guarantee"]), triple_count=int(fields["count"]),
            spanning_set=spanning, triples=tuple(triples),
        )
    except WitnessParseError:
        raise
    except (IndexError, ValueError) as exc:
        raise WitnessParseError(f"malformed witness report: {exc}") from None


def format_regime(R: RegimeReport) -> str:
    return "\n".join([
        "regime",
        f"group_order {R.group_order}",
        f"h_order {R.h_order}",
        f"k {R.k}",
        f"asymptotic_regime {str(R.asymptotic_regime).lower()}",
        f"lambda {R.lambda_}",
        f"rho_max {R.rho_max}",
        f"tau {R.tau}",
        f"notes {R.notes}",
    ]) + "\n"
