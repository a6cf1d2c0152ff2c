"""Batch decisions over (x, y) grids, written as CSV with a resumable journal."""
import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction

from .decide import DEFAULT_CHECK_LIMIT, end_to_end
from .sequence import PisotParams

COLUMNS = (
    "x", "y", "r", "y_mod_x2", "verdict", "order", "coefficients",
    "second_modulus_lo", "second_modulus_hi", "first_failure", "n0",
)


@dataclass(frozen=True)
class ScanRecord:
    x: int
    y: int
    r: str
    y_mod_x2: int
    verdict: str
    order: int = None
    coefficients: str = ""
    second_modulus_lo: str = ""
    second_modulus_hi: str = ""
    first_failure: int = None
    n0: int = None

    @property
    def key(self):
        return (self.x, self.y, self.r)

    def row(self):
        return ["" if v is None else v for v in (getattr(self, c) for c in COLUMNS)]


def _outward(q, rounding, digits=17):
    q = Fraction(q)
    ctx = Context(prec=digits, rounding=rounding)
    return str(ctx.divide(Decimal(q.numerator), Decimal(q.denominator)))


def scan_one(x, y, r, max_order=12, check_limit=DEFAULT_CHECK_LIMIT):
    rep = end_to_end(PisotParams(x, y, r), max_order, 0, check_limit)
    rec = rep.recurrence
    srm = rep.second_root_modulus_bounds
    return ScanRecord(
        x=x,
        y=y,
        r=f"{rep.params.r.numerator}/{rep.params.r.denominator}",
        y_mod_x2=y % (x * x),
        verdict=rep.verdict,
        order=None if rec is None else rec.order_k,
        coefficients="" if rec is None else " ".join(str(c) for c in rec.coefficients),
        second_modulus_lo="" if srm is None else _outward(srm[0], ROUND_FLOOR),
        second_modulus_hi="" if srm is None else _outward(srm[1], ROUND_CEILING),
        first_failure=rep.first_failure,
        n0=rep.n0,
    )


def _scan_task(args):
    return scan_one(*args)


def read_journal(path):
    done = {}
    if not os.path.exists(path):
        return done
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = ScanRecord(**json.loads(line))
            except (ValueError, TypeError):
                # a torn final line from an interrupted run
                continue
            done[rec.key] = rec
    return done


def write_csv(records, path):
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for rec in sorted(records, key=lambda r: (r.x, r.y, Fraction(r.r))):
            w.writerow(rec.row())
    os.replace(tmp, path)


def scan(x_range, y_range, r=Fraction(1, 2), max_order=12, check_limit=DEFAULT_CHECK_LIMIT,
         output_path="scan.csv", jobs=1, journal_path=None):
    """Decide every E_r(x, y) with x < y over the grid; returns the sorted records.

    Finished records go to an append-only JSON-lines journal first, so an
    interrupted scan resumes where it stopped.
    """
    r = Fraction(r)
    rstr = f"{r.numerator}/{r.denominator}"
    journal_path = journal_path or f"{output_path}.journal"
    done = read_journal(journal_path)
    tasks = [(x, y, r, max_order, check_limit) for x in x_range for y in y_range
             if 0 < x < y and (x, y, rstr) not in done]
    wanted = {(x, y, rstr) for x in x_range for y in y_range if 0 < x < y}
    with open(journal_path, "a+") as journal:
        # terminate a torn final line so the next record starts clean
        if journal.tell() > 0:
            journal.seek(journal.tell() - 1)
            if journal.read(1) != "\n":
                journal.write("\n")

        def record(rec):
            journal.write(json.dumps(asdict(rec)) + "\n")
            journal.flush()
            done[rec.key] = rec

        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(_scan_task, t) for t in tasks]
                for fut in as_completed(futures):
                    record(fut.result())
        else:
            for t in tasks:
                record(_scan_task(t))
    records = [done[k] for k in wanted]
    write_csv(records, output_path)
    return sorted(records, key=lambda rec: (rec.x, rec.y))
