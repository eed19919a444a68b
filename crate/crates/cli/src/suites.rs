//! Suite registry. Each suite declares its parameters (defaults are the
//! desk-scale settings), its report columns and its pass contract.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use rsmoment::afe::{conductor_q, conductor_scale, v_weight_direct, v_weight_stirling, LanglandsParams};
use rsmoment::arith::{factorize, kloosterman_average_identity, twist_decomposition_check};
use rsmoment::coeffs::{build_gl2_delta, build_gl3_random, build_gl3_sym_square, coefficient_mean_square, hecke_expand, Gl3Table};
use rsmoment::oscquad::{QuadConfig, SmoothWindow};
use rsmoment::scalar::loglog_slope;
use rsmoment::sieve::{
    classical_ensemble, gallagher_ensemble, hybrid_ensemble, hybrid_lhs_quadrature, hybrid_trial, random_coeffs, trial_seed,
    EnsembleReport, HybridSetup,
};
use rsmoment::spectral::{h_check_cosine, h_check_envelope, h_check_leading, h_check_oracle_with, SpectralWeight, DEFAULT_R_PANELS};

use rsmoment::stphase::{
    airy_ai_taylor_oracle, airy_envelope_error, fresnel_identity_residual, ghat_log_expansion_check, locate_window_center, stationary_phase_i, stationary_phase_oracle,
    voronoi_phi_pair, y_transform_pair, PhasePair, VoronoiWeightParams,
};

use crate::{num, Outcome, ParamSpec, Params, RunError};

/// A runnable verification suite.
pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [ParamSpec],
    pub columns: &'static [&'static str],
    pub run: fn(&Params, u64) -> Result<Outcome, RunError>,
}

const fn int(key: &'static str, default: f64, help: &'static str) -> ParamSpec {
    ParamSpec {
        key,
        default,
        integer: true,
        help,
    }
}

const fn real(key: &'static str, default: f64, help: &'static str) -> ParamSpec {
    ParamSpec {
        key,
        default,
        integer: false,
        help,
    }
}

fn eval_err<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Evaluation(e.to_string())
}

fn s(x: &str) -> Value {
    Value::String(x.to_string())
}

fn cfg() -> QuadConfig<f64> {
    QuadConfig::with_tol(1e-11)
}

pub static SUITES: &[Suite] = &[
    Suite {
        name: "stwist",
        about: "Twisted Kloosterman decomposition over all m, n mod c",
        params: &[int("cmax", 50.0, "largest modulus c")],
        columns: &["c", "max_residual", "tolerance"],
        run: run_stwist,
    },
    Suite {
        name: "kloosterman-avg",
        about: "Kloosterman average identity for admissible (b, r)",
        params: &[
            int("bmax", 20.0, "largest b"),
            int("rmax", 8.0, "largest r"),
            int("vectors", 50.0, "coefficient vectors per (b, r)"),
            int("mlen", 30.0, "coefficients c_m, 1 <= m <= mlen"),
        ],
        columns: &["b", "r", "max_rel_dev"],
        run: run_kloosterman_avg,
    },
    Suite {
        name: "sieve-classical",
        about: "Classical large sieve ratio over random trials",
        params: &[
            int("trials", 1000.0, "number of trials"),
            int("B", 30.0, "largest Farey denominator"),
            int("M", 2000.0, "largest coefficient length"),
        ],
        columns: &["trial", "seed", "B", "N", "M", "lhs", "bound", "ratio"],
        run: run_sieve_classical,
    },
    Suite {
        name: "sieve-gallagher",
        about: "Gallagher hybrid character sieve ratio over random trials",
        params: &[
            int("trials", 500.0, "number of trials"),
            int("Q", 20.0, "largest modulus"),
            int("N", 1000.0, "largest coefficient length"),
            real("U", 10.0, "largest t-range"),
        ],
        columns: &["trial", "seed", "Q", "N", "U", "lhs", "bound", "ratio"],
        run: run_sieve_gallagher,
    },
    Suite {
        name: "sieve-hybrid",
        about: "Hybrid Farey sieve: empirical constant across seeds and kernel-vs-quadrature spot checks",
        params: &[
            int("B", 10.0, "largest Farey denominator"),
            real("T", 4.0, "t-range"),
            int("N", 1_000_000.0, "start of the coefficient range"),
            int("M", 1000.0, "coefficient length"),
            real("scale", 1.0, "phase f(y) = scale * sqrt(y)"),
            int("vectors", 50.0, "random vectors per seed"),
            int("seeds", 5.0, "independent seeds"),
            real("C", 30.0, "constant in the bound"),
            int("spots", 5.0, "quadrature spot checks"),
        ],
        columns: &["kind", "seed", "empirical_c", "max_ratio", "kernel", "quadrature", "rel_dev"],
        run: run_sieve_hybrid,
    },
    Suite {
        name: "airy",
        about: "Leading large-negative-argument Airy term against the series oracle",
        params: &[
            real("xmin", 10.0, "smallest x"),
            real("xmax", 100.0, "largest x"),
            int("points", 10.0, "geometric grid size"),
            int("samples", 32.0, "samples per oscillation period"),
        ],
        columns: &["x", "max_envelope_error"],
        run: run_airy,
    },
    Suite {
        name: "stationary-phase",
        about: "Stationary-phase leading term against the quadrature oracle",
        params: &[
            real("alpha", 2000.0, "spot alpha = beta"),
            real("amin", 200.0, "sweep start"),
            int("doublings", 5.0, "sweep doublings"),
        ],
        columns: &["kind", "alpha", "oracle_re", "oracle_im", "leading_re", "leading_im", "rel_err"],
        run: run_stationary_phase,
    },
    Suite {
        name: "fresnel",
        about: "Fresnel identity residuals",
        params: &[real("z1", 0.0, "first z"), real("z2", 1.0, "second z"), real("z3", 10.0, "third z")],
        columns: &["z", "residual"],
        run: run_fresnel,
    },
    Suite {
        name: "y-transform",
        about: "Y-transform leading term convergence in Z",
        params: &[real("U", 1.0, "prefactor U"), real("Z", 10.0, "smallest Z (doubled twice)"), real("v_ratio", 0.6, "v = v_ratio * Z")],
        columns: &["Z", "oracle_re", "oracle_im", "leading_re", "leading_im", "rel_dev"],
        run: run_y_transform,
    },
    Suite {
        name: "ghat-log",
        about: "Second-order accuracy of the log expansion of the window transform",
        params: &[int("N", 1_000_000.0, "base point n"), real("x", 1.5, "fixed U·x"), real("U", 50.0, "smallest U (doubled thrice)")],
        columns: &["window", "U", "exact", "expanded", "abs_dev"],
        run: run_ghat_log,
    },
    Suite {
        name: "voronoi-phi",
        about: "Voronoi weight leading term at the tuned point and negligibility off-window",
        params: &[
            real("N", 1e4, "dyadic size N"),
            real("U", 1.0, "U"),
            real("A", 1.0, "A"),
            real("B", 5.0, "B"),
            real("v", 1.0, "v"),
            int("grid", 41.0, "window-centre search points"),
            real("offset", 100.0, "off-window factor"),
        ],
        columns: &["kind", "lambda", "oracle_re", "oracle_im", "leading_re", "leading_im", "scale", "ratio", "phase_gap"],
        run: run_voronoi_phi,
    },
    Suite {
        name: "hcheck",
        about: "Kuznetsov transform against its leading term",
        params: &[
            real("T", 10.0, "spectral centre T"),
            real("delta", 4.0, "spectral width"),
            real("xmin", 150.0, "sweep start"),
            real("xmax", 400.0, "sweep end"),
            int("points", 26.0, "sweep points"),
            real("tol", 0.1, "allowed relative deviation"),
        ],
        columns: &["x", "oracle_re", "oracle_im", "leading", "cos", "rel_dev", "excluded"],
        run: run_hcheck,
    },
    Suite {
        name: "afe-v",
        about: "AFE weight against its Stirling leading term",
        params: &[real("t", 0.0, "t"), real("tj1", 50.0, "first t_j"), real("tj2", 200.0, "second t_j"), real("a", 1.0, "spectral parameter a")],
        columns: &["kind", "y", "t", "t_j", "direct_re", "direct_im", "stirling_re", "stirling_im", "deviation"],
        run: run_afe_v,
    },
    Suite {
        name: "conductor",
        about: "Conductor |q|/T^6 over |t| <= T^0.9, T < t_j <= 2T",
        params: &[
            real("T", 100.0, "T"),
            int("nt", 41.0, "t grid points"),
            int("ntj", 40.0, "t_j grid points"),
            real("a", 1.0, "spectral parameter a"),
            real("spread", 100.0, "allowed c2/c1"),
        ],
        columns: &["t", "t_j", "q_abs", "ratio"],
        run: run_conductor,
    },
    Suite {
        name: "coeffs",
        about: "Hecke decomposition and mean-square growth on both GL(3) instances",
        params: &[int("N", 10_000.0, "table size"), real("x1", 1e3, "first x"), real("x2", 1e4, "second x")],
        columns: &["instance", "max_hecke_residual", "ratio_x1", "ratio_x2", "growth"],
        run: run_coeffs,
    },
];

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

fn run_stwist(p: &Params, _: u64) -> Result<Outcome, RunError> {
    let cmax = p.u("cmax").max(1);
    let rows: Vec<(u64, f64)> = (1..=cmax)
        .into_par_iter()
        .map(|c| {
            let mut worst: f64 = 0.0;
            for m in 0..c as i64 {
                for n in 0..c as i64 {
                    let (l, r) = twist_decomposition_check::<f64>(m, n, c);
                    worst = worst.max((l - r).norm());
                }
            }
            (c, worst)
        })
        .collect();
    let pass = rows.iter().all(|&(c, r)| r <= 1e-9 * c as f64);
    Ok(Outcome {
        pass,
        rows: rows.into_iter().map(|(c, r)| vec![c.into(), num(r), num(1e-9 * c as f64)]).collect(),
    })
}

fn admissible(b: u64, r: u64) -> bool {
    factorize(r).iter().all(|&(q, _)| b.is_multiple_of(q))
}

fn run_kloosterman_avg(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let (bmax, rmax, vectors, mlen) = (p.u("bmax"), p.u("rmax"), p.usize("vectors"), p.usize("mlen"));
    let pairs: Vec<(u64, u64)> = (1..=bmax)
        .flat_map(|b| (1..=rmax).filter(move |&r| admissible(b, r)).map(move |r| (b, r)))
        .collect();
    let rows: Result<Vec<(u64, u64, f64)>, RunError> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(b, r))| {
            let mut worst: f64 = 0.0;
            for v in 0..vectors {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, k * vectors.max(1) + v));
                let c: Vec<(i64, Complex64)> =
                    random_coeffs(&mut rng, mlen).into_iter().enumerate().map(|(i, x)| (i as i64 + 1, x)).collect();
                let (l, rh) = kloosterman_average_identity::<f64>(b, r, &c).map_err(eval_err)?;
                // Both sides can vanish exactly; b·r²·Σ|c_m|² is their natural size.
                let mass: f64 = c.iter().map(|x| x.1.norm_sqr()).sum::<f64>() * (b * r * r) as f64;
                worst = worst.max((l - rh).abs() / l.abs().max(rh.abs()).max(mass));
            }
            Ok((b, r, worst))
        })
        .collect();
    let rows = rows?;
    Ok(Outcome {
        pass: rows.iter().all(|r| r.2 <= 1e-8),
        rows: rows.into_iter().map(|(b, r, d)| vec![b.into(), r.into(), num(d)]).collect(),
    })
}

fn ensemble_rows(rep: &EnsembleReport, keys: &[&str]) -> Vec<Vec<Value>> {
    rep.trials
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut row = vec![Value::from(i), Value::from(t.seed)];
            row.extend(keys.iter().map(|k| num(t.params[*k])));
            row.extend([num(t.lhs), num(t.bound), num(t.ratio)]);
            row
        })
        .collect()
}

fn run_sieve_classical(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let rep = classical_ensemble(p.usize("trials"), seed, p.u("B"), p.usize("M")).map_err(eval_err)?;
    Ok(Outcome {
        pass: rep.max_ratio <= 1.0,
        rows: ensemble_rows(&rep, &["B", "N", "M"]),
    })
}

fn run_sieve_gallagher(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let rep = gallagher_ensemble(p.usize("trials"), seed, p.u("Q"), p.usize("N"), p.f("U")).map_err(eval_err)?;
    Ok(Outcome {
        pass: rep.max_ratio <= 1.0,
        rows: ensemble_rows(&rep, &["Q", "N", "U"]),
    })
}

/// Outcome of the hybrid-sieve measurement shared with the acceptance run.
pub struct HybridMeasurement {
    pub constants: Vec<(u64, f64, f64)>,
    pub spots: Vec<(u64, f64, f64)>,
}

impl HybridMeasurement {
    pub fn spread(&self) -> f64 {
        let hi = self.constants.iter().map(|c| c.1).fold(0.0, f64::max);
        let lo = self.constants.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        hi / lo
    }

    pub fn max_spot_dev(&self) -> f64 {
        self.spots.iter().map(|&(_, k, q)| (k - q).abs() / q.abs()).fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.constants.iter().all(|c| c.1.is_finite() && c.1 > 0.0) && self.spread() <= 2.0 && self.max_spot_dev() <= 1e-6
    }
}

/// Empirical constants for `seeds` consecutive seeds and kernel-vs-quadrature
/// spot checks on shortened vectors (`M <= 100`).
pub fn measure_hybrid(setup: &HybridSetup, vectors: usize, seeds: u64, spots: usize, seed: u64) -> Result<HybridMeasurement, RunError> {
    let mut constants = Vec::new();
    for k in 0..seeds {
        let s = seed.wrapping_add(k);
        let rep = hybrid_ensemble(setup, vectors, s).map_err(eval_err)?;
        constants.push((s, rep.empirical_c.unwrap_or(f64::NAN), rep.max_ratio));
    }
    let short = HybridSetup { m: setup.m.min(100), ..*setup };
    let spots: Result<Vec<(u64, f64, f64)>, RunError> = (0..spots)
        .into_par_iter()
        .map(|i| {
            let ts = trial_seed(seed, 10_000 + i);
            let mut rng = ChaCha8Rng::seed_from_u64(ts);
            let a = random_coeffs(&mut rng, short.m);
            let k = hybrid_trial(&short, &a, ts).map_err(eval_err)?.lhs;
            let q = hybrid_lhs_quadrature(&short, &a, 1e-11).map_err(eval_err)?;
            Ok((ts, k, q))
        })
        .collect();
    Ok(HybridMeasurement { constants, spots: spots? })
}

fn run_sieve_hybrid(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let mut setup = HybridSetup::sqrt_phase(p.u("B"), p.f("T"), p.f("scale"), p.u("N"), p.usize("M"));
    setup.c_const = p.f("C");
    let m = measure_hybrid(&setup, p.usize("vectors"), p.u("seeds"), p.usize("spots"), seed)?;
    let mut rows: Vec<Vec<Value>> = m
        .constants
        .iter()
        .map(|&(sd, c, r)| vec![s("ensemble"), sd.into(), num(c), num(r), Value::Null, Value::Null, Value::Null])
        .collect();
    rows.extend(
        m.spots
            .iter()
            .map(|&(sd, k, q)| vec![s("spot"), sd.into(), Value::Null, Value::Null, num(k), num(q), num((k - q).abs() / q.abs())]),
    );
    Ok(Outcome { pass: m.pass(), rows })
}

/// Maximum over one period of the envelope-normalised error of the leading
/// Airy term at `x`.
pub fn airy_period_error(x: f64, samples: usize) -> f64 {
    let period = std::f64::consts::TAU / x.sqrt();
    (0..samples.max(1))
        .map(|k| {
            let t = x + period * k as f64 / samples.max(1) as f64;
            airy_envelope_error(t, 1, airy_ai_taylor_oracle(-t))
        })
        .fold(0.0, f64::max)
}

fn run_airy(p: &Params, _: u64) -> Result<Outcome, RunError> {
    let (lo, hi, n) = (p.f("xmin"), p.f("xmax"), p.usize("points").max(2));
    let xs: Vec<f64> = (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect();
    let errs: Vec<f64> = xs.par_iter().map(|&x| airy_period_error(x, p.usize("samples"))).collect();
    let slope = loglog_slope(&xs, &errs);
    Ok(Outcome {
        pass: errs.iter().all(|&e| e < 0.01) && (-1.8..=-1.2).contains(&slope),
        rows: xs.iter().zip(&errs).map(|(&x, &e)| vec![num(x), num(e)]).collect(),
    })
}

/// `(oracle, leading, relative error)` at `α = β` with the centred bump.
pub fn stationary_phase_point(alpha: f64) -> Result<(Complex64, Complex64, f64), RunError> {
    let y0 = (2.0f64 / 3.0).powi(6);
    let f = SmoothWindow::bump(y0, 0.97 * y0);
    let pp = PhasePair::new(alpha, alpha).map_err(eval_err)?;
    let o = stationary_phase_oracle(&pp, &f, &cfg()).map_err(eval_err)?.value;
    let l = stationary_phase_i(&pp, &f);
    Ok((o, l, (o - l).norm() / o.norm()))
}

fn run_stationary_phase(p: &Params, _: u64) -> Result<Outcome, RunError> {
    let mut alphas = vec![p.f("alpha")];
    alphas.extend((0..=p.u("doublings")).map(|k| p.f("amin") * 2f64.powi(k as i32)));
    let pts: Result<Vec<_>, RunError> = alphas.par_iter().map(|&a| stationary_phase_point(a)).collect();
    let pts = pts?;
    let sweep_errs: Vec<f64> = pts[1..].iter().map(|x| x.2).collect();
    let slope = loglog_slope(&alphas[1..], &sweep_errs);
    let pass = pts[0].2 <= 5e-3 && (-1.3..=-0.7).contains(&slope);
    let rows = alphas
        .iter()
        .zip(&pts)
        .enumerate()
        .map(|(i, (&a, &(o, l, r)))| {
            vec![s(if i == 0 { "spot" } else { "sweep" }), num(a), num(o.re), num(o.im), num(l.re), num(l.im), num(r)]
        })
        .collect();
    Ok(Outcome { pass, rows })
}

fn run_fresnel(p: &Params, _: u64) -> Result<Outcome, RunError> {
    let zs = [p.f("z1"), p.f("z2"), p.f("z3")];
    let res: Result<Vec<f64>, RunError> = zs.par_iter().map(|&z| fresnel_identity_residual(z).map_err(eval_err)).collect();
    let res = res?;
    Ok(Outcome {
        pass: res.iter().all(|&r| r <= 1e-4),
        rows: zs.iter().zip(&res).map(|(&z, &r)| vec![num(z), num(r)]).collect(),
    })
}

fn run_y_transform(p: &Params, _: u64) -> Result<Outcome, RunError> {
    let w3 = SmoothWindow::bump(0.0, 1.0);
    let zs: Vec<f64> = (0..3).map(|k| p.f("Z") * 2f64.powi(k)).collect();
    let pts: Result<Vec<_>, RunError> = zs
        .par_iter()
        .map(|&z| y_transform_pair(p.f("v_ratio") * z, p.f("U"), z, &w3, &cfg()).map_err(eval_err))
        .collect();
    let pts = pts?;
    let devs: Vec<f64> = pts.iter().map(|(o, l)| (o - l).norm() / l.norm()).collect();
    let slope = loglog_slope(&zs, &devs);
    Ok(Outcome {
        pass: slope <= -0.8,
        rows: zs
            .iter()
            .zip(&pts)
            .zip(&devs)
            .map(|((&z, (o, l)), &d)| vec![num(z), num(o.re), num(o.im), num(l.re), num(l.im), num(d)])
            .collect(),
    })
}

fn run_ghat_log(p: &Params, _: u64) -> Result<Outcome, RunError> {
    let n = p.f("N");
    let x = p.f("x");
    let us: Vec<f64> = (0..4).map(|k| p.f("U") * 2f64.powi(k)).collect();
    let mut rows = Vec::new();
    let mut pass = true;
    for (name, g) in [("gaussian", SmoothWindow::gaussian(0.0, 1.0)), ("bump", SmoothWindow::bump(0.0, 2.0))] {
        let mut devs = Vec::new();
        for &u in &us {
            let m = n * (1.0 + x / u).powi(2);
            let (a, b) = ghat_log_expansion_check(m, n, u, &g, &cfg()).map_err(eval_err)?;
            devs.push((a - b).abs());
            rows.push(vec![s(name), num(u), num(a), num(b), num((a - b).abs())]);
        }
        pass &= (-2.3..=-1.7).contains(&loglog_slope(&us, &devs));
    }
    Ok(Outcome { pass, rows })
}

/// Voronoi measurement: `(tuned λ, ratio, gap, oracle, leading, scale)` and
/// the off-window `(λ, |oracle|, scale)`.
pub struct VoronoiMeasurement {
    pub tuned: (f64, f64, f64, Complex64, Complex64, f64),
    pub far: (f64, Complex64, f64),
}

pub fn measure_voronoi(p: &mut VoronoiWeightParams<f64>, grid: usize, offset: f64) -> Result<VoronoiMeasurement, RunError> {
    let c = locate_window_center(p, 0.02, 2.0, grid, &cfg()).map_err(eval_err)?;
    p.window_center = Some(c);
    let lam = p.lambda_for_stationary_point(1.5);
    let r = voronoi_phi_pair(p, lam, &cfg()).map_err(eval_err)?;
    let ratio = r.oracle.norm() / r.leading.norm();
    let gap = (r.oracle * r.leading.conj()).arg().abs();
    let far = voronoi_phi_pair(p, offset * c, &cfg()).map_err(eval_err)?;
    Ok(VoronoiMeasurement {
        tuned: (lam, ratio, gap, r.oracle, r.leading, r.scale),
        far: (offset * c, far.oracle, far.scale),
    })
}

impl VoronoiMeasurement {
    pub fn pass(&self) -> bool {
        (0.9..=1.1).contains(&self.tuned.1) && self.tuned.2 <= 0.1 && self.far.1.norm() <= 1e-8 * self.far.2
    }
}

fn run_voronoi_phi(p: &Params, _: u64) -> Result<Outcome, RunError> {
    let mut vp = VoronoiWeightParams::<f64>::desk();
    vp.n = p.f("N");
    vp.u = p.f("U");
    vp.a = p.f("A");
    vp.b_cap = p.f("B");
    vp.v = p.f("v");
    vp.w = SmoothWindow::bump_on(vp.n, 2.0 * vp.n);
    let m = measure_voronoi(&mut vp, p.usize("grid"), p.f("offset"))?;
    let (lam, ratio, gap, o, l, sc) = m.tuned;
    let (flam, fo, fsc) = m.far;
    Ok(Outcome {
        pass: m.pass(),
        rows: vec![
            vec![s("tuned"), num(lam), num(o.re), num(o.im), num(l.re), num(l.im), num(sc), num(ratio), num(gap)],
            vec![s("offset"), num(flam), num(fo.re), num(fo.im), Value::Null, Value::Null, num(fsc), Value::Null, Value::Null],
        ],
    })
}

/// One hcheck sample: `(x, oracle, leading, cos, relative deviation)`.
pub type HcheckPoint = (f64, Complex64, f64, f64, f64);

pub fn hcheck_sweep(sw: &SpectralWeight<f64>, xs: &[f64]) -> Result<Vec<HcheckPoint>, RunError> {
    xs.iter()
        .map(|&x| {
            let o = h_check_oracle_with(x, sw, DEFAULT_R_PANELS).map_err(eval_err)?;
            let l = h_check_leading(x, sw).value;
            Ok((x, o, l, h_check_cosine(x, sw), (o.re - l).abs() / l.abs()))
        })
        .collect()
}

/// `(max |Im|/max(|ȟ|, envelope), 32-vs-64 panel relative change)` at `x`.
pub fn hcheck_stability(sw: &SpectralWeight<f64>, x: f64) -> Result<(f64, f64), RunError> {
    let a = h_check_oracle_with(x, sw, DEFAULT_R_PANELS).map_err(eval_err)?;
    let b = h_check_oracle_with(x, sw, 2 * DEFAULT_R_PANELS).map_err(eval_err)?;
    Ok((a.im.abs() / a.norm().max(h_check_envelope(x, sw)), (a - b).norm() / b.norm()))
}

fn run_hcheck(p: &Params, _: u64) -> Result<Outcome, RunError> {
    let sw = SpectralWeight::new(p.f("T"), p.f("delta")).map_err(eval_err)?;
    let n = p.usize("points").max(2);
    let (lo, hi) = (p.f("xmin"), p.f("xmax"));
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let pts = hcheck_sweep(&sw, &xs)?;
    let (imag, refine) = hcheck_stability(&sw, 0.5 * (lo + hi))?;
    let tol = p.f("tol");
    let real_ok = pts.iter().all(|pt| pt.1.im.abs() <= 1e-8 * pt.1.norm().max(h_check_envelope(pt.0, &sw)));
    let pass = real_ok
        && imag <= 1e-8
        && refine <= 1e-6
        && pts.iter().filter(|pt| pt.3.abs() >= 0.3).all(|pt| pt.4 <= tol);
    Ok(Outcome {
        pass,
        rows: pts
            .iter()
            .map(|&(x, o, l, c, d)| vec![num(x), num(o.re), num(o.im), num(l), num(c), num(d), Value::Bool(c.abs() < 0.3)])
            .collect(),
    })
}

/// Relative direct-vs-Stirling deviations on `y = u·|q|^{1/2}/π³`.
pub fn afe_deviation_rows(t: f64, tj: f64, lp: &LanglandsParams<f64>) -> Result<Vec<(f64, Complex64, Complex64, f64)>, RunError> {
    let ys = conductor_scale(t, tj, lp);
    [0.1, 0.3, 1.0, 3.0, 10.0]
        .iter()
        .map(|&u| {
            let y = u * ys;
            let d = v_weight_direct(y, t, tj, lp).map_err(eval_err)?;
            let s = v_weight_stirling(y, t, tj, lp).map_err(eval_err)?;
            Ok((y, d, s, (d - s).norm() / d.norm()))
        })
        .collect()
}

fn run_afe_v(p: &Params, _: u64) -> Result<Outcome, RunError> {
    let lp = LanglandsParams::self_dual_tempered(p.f("a"));
    let t = p.f("t");
    let mut rows = Vec::new();
    let mut worst = Vec::new();
    for tj in [p.f("tj1"), p.f("tj2")] {
        let pts = afe_deviation_rows(t, tj, &lp)?;
        worst.push(pts.iter().map(|x| x.3).fold(0.0, f64::max));
        for (y, d, st, dev) in pts {
            rows.push(vec![s("sweep"), num(y), num(t), num(tj), num(d.re), num(d.im), num(st.re), num(st.im), num(dev)]);
        }
    }
    let tj = p.f("tj1");
    let y = 1e-6 * conductor_scale(t, tj, &lp);
    let small = v_weight_direct(y, t, tj, &lp).map_err(eval_err)?;
    let small_dev = (small - 1.0).norm();
    rows.push(vec![s("small-y"), num(y), num(t), num(tj), num(small.re), num(small.im), Value::Null, Value::Null, num(small_dev)]);
    Ok(Outcome {
        pass: worst[0] <= 0.1 && worst[1] < worst[0] && small_dev <= 0.05,
        rows,
    })
}

/// `(t, t_j, |q|, |q|/T⁶)` over `|t| <= T^{0.9}`, `T < t_j <= 2T`.
pub fn conductor_grid(big_t: f64, nt: usize, ntj: usize, lp: &LanglandsParams<f64>) -> Vec<(f64, f64, f64, f64)> {
    let tmax = big_t.powf(0.9);
    let mut out = Vec::new();
    for i in 0..nt.max(2) {
        let t = -tmax + 2.0 * tmax * i as f64 / (nt.max(2) - 1) as f64;
        for j in 1..=ntj.max(1) {
            let tj = big_t + big_t * j as f64 / ntj.max(1) as f64;
            let q = conductor_q(t, tj, lp).magnitude;
            out.push((t, tj, q, q / big_t.powi(6)));
        }
    }
    out
}

fn run_conductor(p: &Params, _: u64) -> Result<Outcome, RunError> {
    let lp = LanglandsParams::self_dual_tempered(p.f("a"));
    let grid = conductor_grid(p.f("T"), p.usize("nt"), p.usize("ntj"), &lp);
    let c1 = grid.iter().map(|g| g.3).fold(f64::INFINITY, f64::min);
    let c2 = grid.iter().map(|g| g.3).fold(0.0, f64::max);
    Ok(Outcome {
        pass: c2 / c1 <= p.f("spread"),
        rows: grid.into_iter().map(|(t, tj, q, r)| vec![num(t), num(tj), num(q), num(r)]).collect(),
    })
}

/// Largest `|hecke_expand - A(l, n)|/max(1, |A|)` over `ln <= N`.
pub fn hecke_residual(t: &Gl3Table) -> Result<f64, RunError> {
    let entries: Vec<_> = t.entries().collect();
    let res: Result<Vec<f64>, RunError> = entries
        .par_iter()
        .map(|&(l, n, v)| Ok((hecke_expand(t, l, n).map_err(eval_err)? - v).norm() / v.norm().max(1.0)))
        .collect();
    Ok(res?.into_iter().fold(0.0, f64::max))
}

fn run_coeffs(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let n = p.usize("N");
    let gl2 = build_gl2_delta(n).map_err(eval_err)?;
    let instances = [
        ("sym-square", build_gl3_sym_square(&gl2)),
        ("random", build_gl3_random(n, seed).map_err(eval_err)?),
    ];
    let mut rows = Vec::new();
    let mut pass = true;
    for (name, t) in &instances {
        let res = hecke_residual(t)?;
        let (_, r1) = coefficient_mean_square(t, p.f("x1")).map_err(eval_err)?;
        let (_, r2) = coefficient_mean_square(t, p.f("x2")).map_err(eval_err)?;
        pass &= res <= 1e-10 && r2 / r1 <= 2.0;
        rows.push(vec![s(name), num(res), num(r1), num(r2), num(r2 / r1)]);
    }
    Ok(Outcome { pass, rows })
}
