"""Parameter sweeps over (L, R, T, model) with CSV output.

A sweep is described by a SweepSpec, serializable to a plain key=value
config file (flags override file values at the CLI).  Results are written
atomically as UTF-8 CSV with '#'-prefixed metadata lines carrying the
schema version, a hash of the resolved config and the physical constants.
Rows appear in deterministic grid order regardless of worker scheduling.
"""

from __future__ import annotations

import concurrent.futures
import csv
import hashlib
import io
import math
import os
import tempfile
from dataclasses import dataclass, field, fields

from scipy.constants import Boltzmann, c, hbar

from . import asymptotics, materials
from .constants import thermal_wavelength_um
from .pfa import pfa_theta
from .thermodynamics import (
    Geometry,
    ThermalState,
    entropy,
    force,
    free_energy,
    zero_temperature_energy,
    zero_temperature_force,
)

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "idx", "L_um", "R_um", "T_K", "model",
    "free_energy_J", "energy_T0_J", "force_N", "force_T0_N",
    "theta", "theta_pfa", "theta_dipole", "entropy_J_per_K",
    "ratio_plasma_drude", "ratio_pfa_plasma_drude",
    "lmax", "m_max", "n_max", "quad_order", "est_rel_err", "status",
)


@dataclass
class SweepSpec:
    """Sweep definition; lengths in um, temperatures in K."""

    models: tuple = ("perfect",)
    gaps_um: tuple = (1.0,)
    radii_um: tuple = (0.5,)
    temperatures_K: tuple = (300.0,)
    lambda_plasma_um: float = 0.136
    lambda_gamma_ratio: float = 250.0
    tol: float = 1e-6
    lmax: int | None = None
    with_entropy: bool = False
    with_theta: bool = True
    with_ratio: bool = False   # plasma/Drude force ratio sweep (fig 3)
    out: str = "sweep.csv"

    def validate(self):
        for name in ("gaps_um", "radii_um", "temperatures_K"):
            vals = getattr(self, name)
            if not vals or any(v <= 0 for v in vals):
                raise ValueError(f"{name} must be non-empty and positive")
            if list(vals) != sorted(vals):
                raise ValueError(f"{name} must be sorted ascending")
        known = {"perfect", "plasma", "drude"}
        if not self.models or not set(self.models) <= known:
            raise ValueError(f"models must be a subset of {known}")

    def material(self, name):
        if name == "perfect":
            return materials.perfect_reflector()
        if name == "plasma":
            return materials.plasma(self.lambda_plasma_um)
        return materials.drude(self.lambda_plasma_um,
                               self.lambda_gamma_ratio
                               * self.lambda_plasma_um)

    def to_config(self):
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ", ".join(str(x) for x in v)
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_config(cls, text):
        kwargs = {}
        tuple_fields = {"models", "gaps_um", "radii_um", "temperatures_K"}
        valid = {f.name: f for f in fields(cls)}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in valid:
                raise ValueError(f"unknown config key: {key}")
            if key in tuple_fields:
                items = tuple(s.strip() for s in val.split(",") if s.strip())
                kwargs[key] = items if key == "models" else tuple(
                    float(x) for x in items)
            elif key == "lmax":
                kwargs[key] = None if val == "None" else int(val)
            elif key in ("with_entropy", "with_theta", "with_ratio"):
                kwargs[key] = val.lower() in ("1", "true", "yes")
            elif key == "out":
                kwargs[key] = val
            else:
                kwargs[key] = float(val)
        spec = cls(**kwargs)
        spec.validate()
        return spec

    def grid(self):
        """Deterministic point list: one row per (L, R, T, model)."""
        pts = []
        idx = 0
        for temp in self.temperatures_K:
            for radius in self.radii_um:
                for gap in self.gaps_um:
                    if self.with_ratio:
                        pts.append((idx, gap, radius, temp, "ratio"))
                        idx += 1
                    else:
                        for model in self.models:
                            pts.append((idx, gap, radius, temp, model))
                            idx += 1
        return pts


def log_grid(lo, hi, n):
    return tuple(float(lo * (hi / lo) ** (i / (n - 1))) for i in range(n))


def _fmt(x):
    return repr(float(x))


def _blank_row(idx, gap, radius, temp, model):
    row = {k: "" for k in CSV_COLUMNS}
    row.update(idx=idx, L_um=_fmt(gap), R_um=_fmt(radius), T_K=_fmt(temp),
               model=model, status="ok")
    return row


def _compute_point(args):
    spec, (idx, gap, radius, temp, model_name) = args
    row = _blank_row(idx, gap, radius, temp, model_name)
    geom = Geometry(gap, radius)
    try:
        if model_name == "ratio":
            _ratio_point(spec, geom, temp, row)
        else:
            _observable_point(spec, geom, temp, spec.material(model_name),
                              model_name, row)
    except Exception as exc:  # per-point failures land in the status column
        row["status"] = f"failed: {type(exc).__name__}: {exc}"
    return row


def _observable_point(spec, geom, temp, model, model_name, row):
    from .constants import HBAR_C_JUM, boltzmann_energy_j
    from .thermodynamics import (_matsubara_sum, _resolve_policy,
                                 _zero_t_integral)

    th = ThermalState(temp)
    policy, rep = _resolve_policy(geom, model, spec.lmax, None, spec.tol,
                                  thermal=th)
    # one Matsubara pass carrying the distance derivative gives both the
    # free energy and the force
    total, dtotal, rep_m = _matsubara_sum(geom, model, th, policy,
                                          with_deriv=True)
    rep.merge(rep_m)
    kbt = boltzmann_energy_j(temp)
    f_val = kbt * total
    frc = kbt * dtotal * 1e6
    row.update(free_energy_J=_fmt(f_val), force_N=_fmt(frc))
    if spec.with_theta:
        vals, err, rep_e = _zero_t_integral(geom, model, policy, 80,
                                            spec.tol, with_deriv=True)
        rep_e.rel_error = max(rep_e.rel_error, err)
        rep.merge(rep_e)
        e0 = HBAR_C_JUM * vals[0] / (2.0 * math.pi)
        f0 = HBAR_C_JUM * vals[1] / (2.0 * math.pi) * 1e6
        row.update(energy_T0_J=_fmt(e0), force_T0_N=_fmt(f0),
                   theta=_fmt(frc / f0),
                   theta_pfa=_fmt(pfa_theta(geom.gap, temp, model,
                                            tol=spec.tol)))
        if model_name == "perfect":
            row["theta_dipole"] = _fmt(asymptotics.theta_perfect_dipole(
                geom.center_distance, temp))
    if spec.with_entropy:
        s_val, rep_s = entropy(geom, model, temp, tol=spec.tol,
                               lmax=rep.lmax)
        rep.merge(rep_s)
        row["entropy_J_per_K"] = _fmt(s_val)
    row.update(lmax=rep.lmax, m_max=rep.m_max, n_max=rep.n_max,
               quad_order=rep.quad_order, est_rel_err=_fmt(rep.rel_error))


def _ratio_point(spec, geom, temp, row):
    th = ThermalState(temp)
    pla = spec.material("plasma")
    dru = spec.material("drude")
    f_p, rep = force(geom, pla, th, tol=spec.tol, lmax=spec.lmax)
    f_d, rep_d = force(geom, dru, th, tol=spec.tol, lmax=rep.lmax)
    rep.merge(rep_d)
    from .pfa import pfa_force
    ratio_pfa = (pfa_force(geom.gap, geom.radius, temp, pla, tol=spec.tol)
                 / pfa_force(geom.gap, geom.radius, temp, dru,
                             tol=spec.tol))
    row.update(model="plasma/drude", force_N=_fmt(f_p),
               ratio_plasma_drude=_fmt(f_p / f_d),
               ratio_pfa_plasma_drude=_fmt(ratio_pfa),
               lmax=rep.lmax, m_max=rep.m_max, n_max=rep.n_max,
               quad_order=rep.quad_order, est_rel_err=_fmt(rep.rel_error))


def default_workers():
    env = os.environ.get("CASPH_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(spec, workers=None, echo=print):
    """Execute a sweep and write its CSV atomically.

    Returns (csv_path, n_failed); rows are emitted in grid order.
    """
    spec.validate()
    points = spec.grid()
    workers = workers or default_workers()
    jobs = [(spec, p) for p in points]
    if workers > 1 and len(points) > 1:
        with concurrent.futures.ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_compute_point, jobs))
    else:
        rows = [_compute_point(j) for j in jobs]
    rows.sort(key=lambda r: r["idx"])

    text = _render_csv(spec, rows)
    directory = os.path.dirname(os.path.abspath(spec.out)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, spec.out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    n_failed = sum(1 for r in rows if r["status"] != "ok")
    echo(f"wrote {spec.out}: {len(rows)} rows, {n_failed} failed")
    return spec.out, n_failed


def _render_csv(spec, rows):
    cfg = spec.to_config()
    digest = hashlib.sha256(cfg.encode()).hexdigest()[:16]
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA_VERSION}\n")
    buf.write(f"# config_sha256={digest}\n")
    buf.write(f"# hbar={hbar!r} c={c!r} k_B={Boltzmann!r}\n")
    buf.write(f"# lambda_T(300K)_um={thermal_wavelength_um(300.0)!r}\n")
    for line in cfg.strip().splitlines():
        buf.write(f"# cfg {line}\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
