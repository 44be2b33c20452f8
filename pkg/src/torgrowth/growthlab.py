"""Experiment orchestration: configs, growth runs, reports, and check suites.

A run loads a module (inline matrix, presentation file, optionally the
branched-cover construction), walks a subgroup sequence (cyclic, diagonal,
or the explicit converging family), records one GrowthSample per subgroup,
estimates the Mahler measure of the module's first non-vanishing Alexander
polynomial, and persists a CSV table plus a JSON report.  Runs are
deterministic given the config and seed; `final_gap` is the gap at the
largest index, which for more than one variable is *not* a convergence claim
(only the limsup is guaranteed in general).
"""

from __future__ import annotations

import json
import pathlib
import platform
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from . import __version__
from .groupalg import (
    SubLattice,
    alpha_ideal,
    beta_ideal,
    intersect_ideals,
    quotient_order,
    sum_ideals,
)
from .lattices import Direction, FinAbGroup, Subgroup, converging_k_sequence, gamma_sj
from .laurent import LaurentPoly, poly_to_json
from .mahler import MahlerEstimate, mahler_lawton, mahler_quadrature, mahler_univariate
from .presmod import (
    PresentedModule,
    alexander_module,
    branched_module,
    delta,
    parse_presentation,
)
from .torsion import GrowthSample, growth_sample

SIZE_GUARD = 5000


class ConfigError(ValueError):
    """The experiment configuration is malformed."""


class SizeGuardExceeded(RuntimeError):
    """A subgroup would expand past the SNF size guard (use force=True)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description: one module source, one sequence."""

    module: PresentedModule
    module_source: str
    branched: bool
    sequence: tuple[tuple[str, Subgroup], ...]
    mahler_method: str = "auto"
    mahler_samples: int = 1_000_000
    mahler_schedule: tuple[tuple[int, ...], ...] | None = None
    seed: int = 0
    jobs: int = 1
    force: bool = False

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | pathlib.Path = ".",
                  seed: int | None = None, jobs: int | None = None,
                  force: bool = False) -> "ExperimentConfig":
        base = pathlib.Path(base_dir)
        msrc = data.get("module")
        if not isinstance(msrc, dict):
            raise ConfigError("config needs a 'module' object")
        sources = [k for k in ("matrix", "presentation") if k in msrc]
        if len(sources) != 1:
            raise ConfigError("module must have exactly one source: 'matrix' or 'presentation'")
        branched = bool(msrc.get("branched", False))
        if sources[0] == "matrix":
            if "nvars" not in msrc:
                raise ConfigError("inline matrix module needs 'nvars'")
            mod = PresentedModule.from_json(
                {"nvars": msrc["nvars"], "matrix": msrc["matrix"], "m0": msrc.get("m0", -1)}
            )
            source = "inline-matrix"
            if branched:
                raise ConfigError("branched mode needs a group presentation source")
        else:
            path = base / msrc["presentation"]
            try:
                pres = parse_presentation(path.read_text())
            except OSError as exc:
                raise ConfigError(f"cannot read presentation file: {exc}") from exc
            mod = alexander_module(pres)
            source = str(path)
            if branched:
                mod = branched_module(mod, pres.nvars)
        seq = data.get("sequence")
        if not isinstance(seq, dict) or len(seq) != 1:
            raise ConfigError("config needs exactly one sequence spec")
        kind, spec = next(iter(seq.items()))
        subgroups: list[tuple[str, Subgroup]] = []
        if kind == "cyclic":
            if mod.nvars != 1:
                raise ConfigError("cyclic sequences need a one-variable module")
            start, stop = int(spec.get("start", 1)), int(spec["stop"])
            step = int(spec.get("step", 1))
            for ell in range(start, stop + 1, step):
                subgroups.append((f"cyclic:{ell}", Subgroup.cyclic(ell)))
        elif kind == "diagonal":
            if "ds" in spec:
                ds = [int(d) for d in spec["ds"]]
            else:
                ds = list(range(int(spec.get("start", 1)), int(spec["stop"]) + 1,
                                int(spec.get("step", 1))))
            for d in ds:
                subgroups.append((f"diagonal:{d}", Subgroup.diagonal(mod.nvars, d)))
        elif kind == "gamma_sj":
            kappa = Direction.from_vector([float(x) for x in spec["kappa"]])
            if len(kappa.coords) != mod.nvars:
                raise ConfigError("kappa length must match the module's variables")
            js = [int(j) for j in spec["js"]]
            s_start = int(spec.get("s_start", 1))
            for offset, j in enumerate(js):
                s = s_start + offset
                k = converging_k_sequence(kappa, s)
                subgroups.append((f"gamma_sj:s={s},k={list(k)},j={j}", gamma_sj(k, j)))
        else:
            raise ConfigError(f"unknown sequence kind {kind!r}")
        if not subgroups:
            raise ConfigError("empty subgroup sequence")
        msettings = data.get("mahler", {})
        method = msettings.get("method", "auto")
        if method not in ("auto", "jensen", "lawton", "quadrature"):
            raise ConfigError(f"unknown mahler method {method!r}")
        schedule = msettings.get("schedule")
        if schedule is not None:
            schedule = tuple(tuple(int(x) for x in k) for k in schedule)
        return cls(
            module=mod,
            module_source=source,
            branched=branched,
            sequence=tuple(subgroups),
            mahler_method=method,
            mahler_samples=int(msettings.get("samples", 1_000_000)),
            mahler_schedule=schedule,
            seed=int(data.get("seed", 0) if seed is None else seed),
            jobs=int(data.get("jobs", 1) if jobs is None else jobs),
            force=force or bool(data.get("force", False)),
        )

    @classmethod
    def from_file(cls, path, **kwargs) -> "ExperimentConfig":
        p = pathlib.Path(path)
        try:
            data = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load config {p}: {exc}") from exc
        return cls.from_dict(data, base_dir=p.parent, **kwargs)


@dataclass
class ExperimentReport:
    """Results of one growth run, ordered by subgroup index."""

    delta_poly: LaurentPoly
    target: MahlerEstimate
    samples: list[GrowthSample]
    final_gap: float
    metadata: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "delta": {"nvars": self.delta_poly.nvars, "poly": poly_to_json(self.delta_poly)},
            "target": self.target.to_json(),
            "samples": [
                {
                    "gamma": s.gamma,
                    "index": s.index,
                    "min_norm": s.min_norm,
                    "torsion_order": str(s.torsion_order),
                    "log_torsion": s.log_torsion,
                    "growth_stat": s.growth_stat,
                    "betti": s.betti,
                    "direction": list(s.direction) if s.direction else None,
                }
                for s in self.samples
            ],
            "final_gap": self.final_gap,
            "metadata": self.metadata,
        }

    def csv_text(self) -> str:
        lines = [GrowthSample.CSV_HEADER]
        lines.extend(s.csv_row() for s in self.samples)
        return "\n".join(lines) + "\n"


def mahler_target(poly: LaurentPoly, method: str = "auto", samples: int = 1_000_000,
                  seed: int = 0, schedule=None) -> MahlerEstimate:
    """Dispatch a Mahler estimate for the growth target."""
    if method == "auto":
        method = "jensen" if poly.nvars == 1 else "lawton"
    if method == "jensen":
        if poly.nvars != 1:
            raise ConfigError("jensen needs a univariate polynomial; use lawton/quadrature")
        return mahler_univariate(poly)
    if method == "lawton":
        if poly.nvars == 1:
            return mahler_univariate(poly)
        return mahler_lawton(poly, schedule)
    return mahler_quadrature(poly, samples=samples, seed=seed)


def _sample_task(args) -> GrowthSample:
    mod_json, gens, descriptor = args
    mod = PresentedModule.from_json(mod_json)
    return growth_sample(mod, Subgroup.from_json(gens), descriptor)


def run(config: ExperimentConfig, out_dir=None) -> ExperimentReport:
    """Execute a growth experiment; write samples.csv and report.json when
    an output directory is given."""
    t_start = time.perf_counter()
    mod = config.module
    for _, gamma in config.sequence:
        order = 1
        for row in gamma.basis():
            j = next(i for i, x in enumerate(row) if x)
            order *= abs(row[j])
        if order * mod.m0 > SIZE_GUARD and not config.force:
            raise SizeGuardExceeded(
                f"|A|*m0 = {order * mod.m0} exceeds {SIZE_GUARD}; pass force to override"
            )
    dpoly = delta(mod).poly
    t_delta = time.perf_counter()
    target = mahler_target(
        dpoly,
        method=config.mahler_method,
        samples=config.mahler_samples,
        seed=config.seed,
        schedule=config.mahler_schedule,
    )
    t_target = time.perf_counter()
    tasks = [(mod.to_json(), gamma.to_json(), desc) for desc, gamma in config.sequence]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            samples = list(pool.map(_sample_task, tasks))
    else:
        samples = [_sample_task(t) for t in tasks]
    samples.sort(key=lambda s: (s.index, s.gamma))
    final_gap = abs(samples[-1].growth_stat - target.value)
    t_end = time.perf_counter()
    report = ExperimentReport(
        delta_poly=dpoly,
        target=target,
        samples=samples,
        final_gap=final_gap,
        metadata={
            "version": __version__,
            "python": platform.python_version(),
            "seed": config.seed,
            "module_source": config.module_source,
            "branched": config.branched,
            "timings": {
                "delta_s": t_delta - t_start,
                "target_s": t_target - t_delta,
                "samples_s": t_end - t_target,
            },
        },
    )
    if out_dir is not None:
        out = pathlib.Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "samples.csv").write_text(report.csv_text())
        (out / "report.json").write_text(
            json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"
        )
    return report


# ---------------------------------------------------------------------------
# Group-algebra identity battery (shared by the CLI and the test suite)
# ---------------------------------------------------------------------------


def _random_group(rng: random.Random, max_order: int) -> FinAbGroup:
    while True:
        r = rng.randint(1, 3)
        factors = []
        d = rng.choice([2, 2, 3, 4, 5, 6])
        factors.append(d)
        for _ in range(r - 1):
            d = d * rng.choice([1, 1, 2, 3])
            factors.append(d)
        order = 1
        for x in factors:
            order *= x
        if order <= max_order:
            return FinAbGroup.from_invariant_factors(factors)


def groupalg_identity_suite(cases: int = 20, max_order: int = 50, seed: int = 0) -> list[dict]:
    """Randomized checks of the subgroup-ideal order identities in Z[A].

    Per case: the exact order |Z[A]/(alpha(B) + beta(B))| = |B|^(|A|/|B|),
    the rank |A|/|B| of alpha, mutual annihilation of the two ideals, and
    the multi-subgroup order bound.  Returns one result dict per check.
    """
    rng = random.Random(seed)
    results = []
    for case in range(cases):
        A = _random_group(rng, max_order)
        bgens = [
            tuple(rng.randrange(d) for d in A.invariant_factors)
            for _ in range(rng.randint(0, 2))
        ]
        B = A.subgroup_closure(bgens)
        al = alpha_ideal(A, bgens)
        be = beta_ideal(A, bgens)
        expected = len(B) ** (A.order // len(B))
        got = quotient_order(SubLattice.standard(A.order), sum_ideals([al, be]))
        results.append(
            {
                "case": case,
                "check": "order |Z[A]/(alpha+beta)| = |B|^(|A|/|B|)",
                "group": list(A.invariant_factors),
                "ok": got == expected,
                "detail": f"got {got}, expected {expected}",
            }
        )
        results.append(
            {
                "case": case,
                "check": "rank alpha = |A|/|B|",
                "group": list(A.invariant_factors),
                "ok": al.rank == A.order // len(B),
                "detail": f"rank {al.rank} vs {A.order // len(B)}",
            }
        )
        from .groupalg import GroupAlgElem

        annihilates = True
        for va in al.vectors[:2]:
            for vb in be.vectors[:2]:
                if not (GroupAlgElem(A, va) * GroupAlgElem(A, vb)).is_zero():
                    annihilates = False
        results.append(
            {
                "case": case,
                "check": "alpha * beta = 0",
                "group": list(A.invariant_factors),
                "ok": annihilates,
                "detail": "",
            }
        )
        bgens2 = [tuple(rng.randrange(d) for d in A.invariant_factors)]
        B2 = A.subgroup_closure(bgens2)
        alsum = sum_ideals([al, alpha_ideal(A, bgens2)])
        beint = intersect_ideals([be, beta_ideal(A, bgens2)])
        bound = expected * len(B2) ** (A.order // len(B2))
        got2 = quotient_order(SubLattice.standard(A.order), sum_ideals([alsum, beint]))
        results.append(
            {
                "case": case,
                "check": "multi-subgroup order bound",
                "group": list(A.invariant_factors),
                "ok": got2 <= bound,
                "detail": f"order {got2} <= bound {bound}",
            }
        )
    return results
