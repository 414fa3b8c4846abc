"""Run every verification and collect the outcomes in one JSON report.

Items are grouped in sections that run in a fixed order.  A section that
raises marks all of its items as failed with the exception recorded; the
remaining sections still run.

Report schema (``VerificationReport.to_dict``)::

    {
      "toolkit_version": str,
      "constants": {"alpha": float, "beta": float, "gamma": float},
      "config": {...},
      "summary": {"items": int, "passed": int, "failed": int},
      "items": [
        {"name": str, "paper_anchor": str, "status": "pass" | "fail",
         "exact": bool, "exact_zero": bool | null, "residual": float | null,
         "tolerance": float | null, "runtime_ms": float | null, "detail": str},
        ...
      ]
    }

Exact items carry ``exact_zero`` (true when the identity holds with zero
residual) and a null ``residual``; numeric items carry ``residual`` and
``tolerance`` and a null ``exact_zero``.
"""
from __future__ import annotations

import fnmatch
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import gcd
from typing import Any, Callable

import numpy as np

from . import __version__, reference
from .constants import beta_by_quadrature, beta_function, gamma_by_quadrature, lattice_constants
from .quadrature import QuadratureSpec

# ---------------------------------------------------------------------------


@dataclass
class ReportItem:
    name: str
    paper_anchor: str
    status: str
    exact: bool
    exact_zero: bool | None = None
    residual: float | None = None
    tolerance: float | None = None
    runtime_ms: float | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


_LATTICE = "Section 3.2 lattice identities"
_PULLBACK = "Sections 3.1 and 3.4 pullback identities"

#: item name -> anchor in the source construction
ITEM_ANCHORS: dict[str, str] = {
    "constants.gamma_quadrature": "Lemma 3.2 (gamma integral)",
    "constants.beta_function": "Eq. (4) lattice constants (Beta function)",
    "periods.closed_form_A1": "Lemma 3.1",
    "periods.closed_form_A2": "Lemma 3.1",
    "periods.beta_sqrt3_gamma": "Lemma 3.2",
    "periods.pullback_consistency": "Section 3.1 pullback transport",
    "periods.matrix_matches_display": "Section 3.1 period matrix Omega",
    "lattice.omega_forward": _LATTICE,
    "lattice.omega_backward": _LATTICE,
    "lattice.real_forward": _LATTICE,
    "lattice.real_backward": _LATTICE,
    "lattice.imag_forward": _LATTICE,
    "lattice.imag_backward": _LATTICE,
    "periods.real_imag_split": "Section 3.2 real and imaginary parts",
    "torus.base_surface": "Proposition 3.1 (f well defined in R^4/Lambda)",
    "torus.conjugate_surface": "Proposition 3.1 (f_{pi/2} well defined in R^4/Lambda_{pi/2})",
    "associate.rank_sweep": "Section 3.2 rank_Q Re(e^{i theta} Omega) = 4",
    **{f"homology.wedge_{i}{j}": "Lemma 3.3" for i in range(1, 5) for j in range(i + 1, 5)},
    "symmetry.pullback_phi": _PULLBACK,
    "symmetry.pullback_phi1": _PULLBACK,
    "symmetry.pullback_phi2": _PULLBACK,
    "symmetry.group_order": "Lemma 3.4 (D_12)",
    "symmetry.dihedral_relations": "Lemma 3.4 (D_12)",
    "symmetry.reducible": "Lemma 3.4 (only reducible symmetry)",
    "curve.conformality": "Theorem 1.1 condition (2)",
    "curve.no_common_zeros": "Theorem 1.1 condition (1)",
    "obstruction.table": "Main Theorem 1 (g = 3r + 1)",
}


def _exact(name, holds: bool, detail: str = "") -> ReportItem:
    return ReportItem(name, ITEM_ANCHORS[name], "pass" if holds else "fail", True,
                      exact_zero=bool(holds), detail=detail)


def _numeric(name, residual: float, tol: float, detail: str = "") -> ReportItem:
    ok = bool(np.isfinite(residual) and residual <= tol)
    return ReportItem(name, ITEM_ANCHORS[name], "pass" if ok else "fail", False,
                      residual=float(residual), tolerance=tol, detail=detail)


@dataclass
class VerificationReport:
    items: list[ReportItem]
    toolkit_version: str
    constants: dict[str, float]
    config: dict[str, Any] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(i.passed for i in self.items)

    def failed(self) -> list[str]:
        return [i.name for i in self.items if not i.passed]

    def item(self, name: str) -> ReportItem:
        for i in self.items:
            if i.name == name:
                return i
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "toolkit_version": self.toolkit_version,
            "constants": dict(self.constants),
            "config": self.config,
            "summary": {
                "items": len(self.items),
                "passed": sum(i.passed for i in self.items),
                "failed": sum(not i.passed for i in self.items),
            },
            "items": [asdict(i) for i in self.items],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=True) + "\n"


# --- sections ---------------------------------------------------------------

def _spec(config) -> QuadratureSpec | None:
    tol = config.get("tol")
    return None if tol is None else QuadratureSpec(abs_tol=tol, rel_tol=tol)


def _section_constants(config) -> list[ReportItem]:
    spec = _spec(config)
    g, err = gamma_by_quadrature(spec) if spec else gamma_by_quadrature()
    # gamma has the closed form B(1/3, 1/6) / 12 (beta = sqrt3 gamma), used here
    # only as an independent check of the quadrature
    closed = beta_function(1 / 3, 1 / 6) / 12
    b_quad = beta_by_quadrature(1 / 3, 1 / 6, spec) if spec else beta_by_quadrature(1 / 3, 1 / 6)
    b_lanczos = beta_function(1 / 3, 1 / 6)
    return [
        _numeric("constants.gamma_quadrature", abs(g - closed) / closed, 1e-10,
                 f"gamma = {g!r}, error estimate {err:.2e}"),
        _numeric("constants.beta_function", abs(b_quad - b_lanczos) / b_lanczos, 1e-10,
                 "B(1/3, 1/6): Lanczos log-gamma vs direct quadrature"),
    ]


def _section_periods(config) -> list[ReportItem]:
    from .cycles import COLUMN_LABELS, generate_all_cycles
    from .periods import (PERIOD_SPEC, PeriodMatrix, closed_form_numeric, numeric_period_matrix,
                          period_vector, symbolic_period_matrix, verify_beta_gamma_relation)
    spec = _spec(config) or PERIOD_SPEC
    cycles = generate_all_cycles()
    items = []
    for base in ("A1", "A2"):
        v, _ = period_vector(cycles[base], spec)
        res = float(np.max(np.abs(v - closed_form_numeric(base))))
        items.append(_numeric(f"periods.closed_form_{base}", res, 1e-8))
    relation = verify_beta_gamma_relation(spec)
    items.append(_numeric("periods.beta_sqrt3_gamma", relation.constant_residual, 1e-10,
                          f"B5 direct vs closed form {relation.direct_vs_closed:.2e}"))
    numeric, errors = numeric_period_matrix(spec)
    pm = PeriodMatrix(numeric, errors, symbolic_period_matrix(), COLUMN_LABELS)
    items.append(_numeric("periods.pullback_consistency", pm.max_discrepancy(), 1e-8,
                          "80 (cycle, component) entries"))
    items.append(_exact("periods.matrix_matches_display", pm.matches_reference()))
    return items


def _section_lattice(config) -> list[ReportItem]:
    from .lattice import lattice_identities, verify_lattice_transformation
    mats = reference.load_integer_matrices()
    mutate = config.get("mutate")
    if mutate:
        name = mutate["matrix"]
        mats[name] = [list(r) for r in mats[name]]
        mats[name][mutate["row"] - 1][mutate["col"] - 1] += mutate.get("delta", 1)
    ids = lattice_identities(mats)
    return [
        _exact("lattice.omega_forward", ids.omega_forward, "Omega G^Omega_1 = (Omega_8, Omega_9)"),
        _exact("lattice.omega_backward", ids.omega_backward, "(Omega_8, Omega_9) G^Omega_2 = Omega"),
        _exact("lattice.real_forward", ids.real_forward, "Omega_R G^R_1 = Lambda"),
        _exact("lattice.real_backward", ids.real_backward, "Lambda G^R_2 = Omega_R"),
        _exact("lattice.imag_forward", ids.imag_forward, "Omega_I G^I_1 = Lambda_{pi/2}"),
        _exact("lattice.imag_backward", ids.imag_backward, "Lambda_{pi/2} G^I_2 = Omega_I"),
        _exact("periods.real_imag_split", ids.split_matches),
        _exact("torus.base_surface",
               verify_lattice_transformation(reference.omega_real(), reference.lattice_basis(),
                                      mats["G_R_1"], mats["G_R_2"])),
        _exact("torus.conjugate_surface",
               verify_lattice_transformation(reference.omega_imag(), reference.conjugate_lattice_basis(),
                                      mats["G_I_1"], mats["G_I_2"])),
    ]


def _section_associate(config) -> list[ReportItem]:
    from .lattice import associate_rank
    bound = config.get("associate_bound", 20)
    ranks = {associate_rank(m, n) for m in range(-bound, bound + 1)
             for n in range(-bound, bound + 1) if n != 0 and gcd(m, n) == 1}
    return [_exact("associate.rank_sweep", ranks == {4},
                   f"ranks seen {sorted(ranks)} for |m|, |n| <= {bound}")]


def _section_homology(config) -> list[ReportItem]:
    from .homology import HOMOLOGY_SPEC, verify_homological_triviality
    res = verify_homological_triviality(spec=_spec(config) or HOMOLOGY_SPEC)
    items = []
    for w in res.integrals:
        i, j = w.pair
        items.append(_numeric(
            f"homology.wedge_{i}{j}", w.relative if w.excision_change < 1e-6 else math.inf,
            1e-4, f"integral {w.value:.3e}, S = {w.normalizer:.6f}, "
                  f"excision halving changes it by {w.excision_change:.2e}"))
    return items


def _section_symmetry(config) -> list[ReportItem]:
    from .symmetry import (EXPECTED_PULLBACKS, PHI1_PULLBACK, PHI2_PULLBACK, dihedral_relations,
                           generated_group, verify_pullback)
    items = []
    for name, (aut, expected) in EXPECTED_PULLBACKS.items():
        items.append(_numeric(f"symmetry.pullback_{name}", verify_pullback(aut, expected, 100),
                              1e-12, "100 random points"))
    group = generated_group([PHI1_PULLBACK.rows(), PHI2_PULLBACK.rows()])
    items.append(_exact("symmetry.group_order", group.order == 24, f"order {group.order}"))
    items.append(_exact("symmetry.dihedral_relations", dihedral_relations().all()))
    items.append(_exact("symmetry.reducible",
                        group.all_block_diagonal and all(group.generator_reducible)))
    return items


def _section_curve(config) -> list[ReportItem]:
    from .curve import check_no_common_zeros, conformality_polynomial
    return [
        _exact("curve.conformality", conformality_polynomial() == 0),
        _exact("curve.no_common_zeros", check_no_common_zeros()),
    ]


def _section_obstruction(config) -> list[ReportItem]:
    from .curve import Admissible, trigonal_obstruction
    limit = config.get("obstruction_limit", 301)
    ok = all(isinstance(trigonal_obstruction(g), Admissible) == (g % 3 == 1 and g >= 4)
             for g in range(limit + 1))
    return [_exact("obstruction.table", ok, f"0 <= g <= {limit}")]


#: section name -> (runner, item names it produces)
SECTIONS: dict[str, tuple[Callable, tuple[str, ...]]] = {
    "constants": (_section_constants, ("constants.gamma_quadrature", "constants.beta_function")),
    "periods": (_section_periods, ("periods.closed_form_A1", "periods.closed_form_A2",
                                   "periods.beta_sqrt3_gamma", "periods.pullback_consistency",
                                   "periods.matrix_matches_display")),
    "lattice": (_section_lattice, ("lattice.omega_forward", "lattice.omega_backward",
                                   "lattice.real_forward", "lattice.real_backward",
                                   "lattice.imag_forward", "lattice.imag_backward",
                                   "periods.real_imag_split", "torus.base_surface",
                                   "torus.conjugate_surface")),
    "associate": (_section_associate, ("associate.rank_sweep",)),
    "homology": (_section_homology, tuple(f"homology.wedge_{i}{j}"
                                          for i in range(1, 5) for j in range(i + 1, 5))),
    "symmetry": (_section_symmetry, ("symmetry.pullback_phi", "symmetry.pullback_phi1",
                                     "symmetry.pullback_phi2", "symmetry.group_order",
                                     "symmetry.dihedral_relations", "symmetry.reducible")),
    "curve": (_section_curve, ("curve.conformality", "curve.no_common_zeros")),
    "obstruction": (_section_obstruction, ("obstruction.table",)),
}

DEFAULT_CONFIG: dict[str, Any] = {"sections": list(SECTIONS), "timing": True, "jobs": 1}


def item_names(sections=None) -> list[str]:
    return [n for s in (sections or SECTIONS) for n in SECTIONS[s][1]]


def _run_section(name: str, config: dict) -> tuple[list[ReportItem], float]:
    runner, names = SECTIONS[name]
    t0 = time.perf_counter()
    try:
        items = runner(config)
    except Exception as exc:  # recorded, never aborts the suite
        msg = f"{type(exc).__name__}: {exc}"
        items = [ReportItem(n, ITEM_ANCHORS[n], "fail", False, detail=msg) for n in names]
    return items, (time.perf_counter() - t0) * 1e3


def run_all(config: dict | None = None) -> VerificationReport:
    """Run the selected sections in their fixed order.

    ``config`` keys (all optional): ``sections`` (list of section names; an
    empty config runs only ``constants``), ``only`` (glob on item names),
    ``tol`` (quadrature tolerance override), ``mutate`` ({matrix, row, col,
    delta} applied to one integer matrix), ``timing`` (record runtimes; off
    gives byte-identical reports), ``jobs`` (worker processes).
    """
    config = dict(DEFAULT_CONFIG if config is None else config)
    sections = config.get("sections") or ["constants"]
    unknown = [s for s in sections if s not in SECTIONS]
    if unknown:
        raise ValueError(f"unknown sections {unknown}")
    only = config.get("only")
    if only:
        sections = [s for s in sections if any(fnmatch.fnmatchcase(n, only) for n in SECTIONS[s][1])]
    ordered = [s for s in SECTIONS if s in sections]
    jobs = int(config.get("jobs", 1) or 1)
    if jobs > 1 and len(ordered) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_section, s, config) for s in ordered]
            results = [f.result() for f in futures]
    else:
        results = [_run_section(s, config) for s in ordered]
    items: list[ReportItem] = []
    for section_items, ms in results:
        share = ms / max(len(section_items), 1)
        for it in section_items:
            if only and not fnmatch.fnmatchcase(it.name, only):
                continue
            it.runtime_ms = round(share, 3) if config.get("timing", True) else None
            items.append(it)
    k = lattice_constants()
    return VerificationReport(
        items=items,
        toolkit_version=__version__,
        constants={"alpha": k.alpha, "beta": k.beta, "gamma": k.gamma},
        config={key: config[key] for key in sorted(config)},
    )
