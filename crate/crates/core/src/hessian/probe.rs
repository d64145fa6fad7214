//! Sampling `Lambda` on random decomposed polyhedra and recording its
//! spectrum. The output is data: nothing here asserts positive
//! definiteness.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{find_apex, lambda_matrix, rigidity_from_lambda, Decomposition};
use crate::cauchy::dent;
use crate::error::{Error, Result};
use crate::generate::{random_convex_surface, trial_rng, trial_seed};
use crate::geometry::{classify_convexity, ConvexityClass, Point3};
use crate::suspension::{random_suspension, SuspensionProfile};
use crate::tol::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeFamily {
    /// Star decomposition of a random hull dented at one edge.
    DentedHull,
    /// Random weakly convex suspension cut along its axis.
    Suspension,
    /// Star decomposition of a random convex hull: few interior edges when
    /// the apex has high degree.
    ConvexStar,
    /// Suspensions with random radii: usually not weakly convex.
    Control,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub seed: u64,
    pub trials: usize,
    /// Trial `t` uses family `families[t % len]`.
    pub families: Vec<ProbeFamily>,
    pub min_vertices: usize,
    pub max_vertices: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            seed: 0,
            trials: 500,
            families: vec![
                ProbeFamily::DentedHull,
                ProbeFamily::Suspension,
                ProbeFamily::ConvexStar,
                ProbeFamily::Control,
            ],
            min_vertices: 6,
            max_vertices: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeInstance {
    pub trial: usize,
    pub trial_seed: u64,
    pub family: ProbeFamily,
    pub vertices: Vec<[f64; 3]>,
    pub tetrahedra: Vec<[usize; 4]>,
    pub weakly_convex: bool,
    pub r: usize,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub diagonal_positive: bool,
    pub positive_definite: bool,
    pub rigid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let at = |q: f64| v[((v.len() - 1) as f64 * q).round() as usize];
        Some(Quantiles { min: v[0], q25: at(0.25), median: at(0.5), q75: at(0.75), max: v[v.len() - 1] })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub config: ProbeConfig,
    pub tolerances: Tolerance,
    pub attempted: usize,
    pub instances: Vec<ProbeInstance>,
    /// Reason -> count.
    pub skipped: BTreeMap<String, usize>,
    pub weakly_convex_count: usize,
    /// Distribution of the smallest eigenvalue over weakly convex instances.
    pub min_eigenvalue_quantiles: Option<Quantiles>,
    pub diagonal_positive_rate: f64,
    /// Weakly convex instances whose `Lambda` is not positive definite,
    /// reported in full.
    pub non_pd_weakly_convex: Vec<ProbeInstance>,
    pub non_pd_controls: usize,
}

fn decomposition_for<R: Rng>(rng: &mut R, family: ProbeFamily, n: usize, tol: &Tolerance) -> Result<Decomposition> {
    match family {
        ProbeFamily::DentedHull | ProbeFamily::ConvexStar => {
            let hull = random_convex_surface(rng, n, 1e-6)?;
            let surface = if family == ProbeFamily::DentedHull {
                let e = *hull.edges().choose(rng).expect("edges");
                dent(&hull, e, tol)?.surface
            } else {
                hull
            };
            find_apex(&surface, tol)
                .map(|(_, d)| d)
                .ok_or_else(|| Error::Precondition("no vertex sees every face".into()))
        }
        ProbeFamily::Suspension | ProbeFamily::Control => {
            let profile =
                if family == ProbeFamily::Suspension { SuspensionProfile::Star } else { SuspensionProfile::Random };
            let s = random_suspension(rng, n.max(3), profile, tol)?;
            Decomposition::of_suspension(&s, tol)
        }
    }
}

fn evaluate(trial: usize, seed: u64, family: ProbeFamily, d: &Decomposition, tol: &Tolerance) -> Result<ProbeInstance> {
    let lm = lambda_matrix(d, tol)?;
    let rigid = rigidity_from_lambda(d, tol)?;
    let min_eigenvalue = lm.min_eigenvalue().unwrap_or(f64::INFINITY);
    let scale = lm.max_abs();
    Ok(ProbeInstance {
        trial,
        trial_seed: seed,
        family,
        vertices: d.vertices().iter().map(|p| [p.x, p.y, p.z]).collect(),
        tetrahedra: d.tetrahedra().to_vec(),
        weakly_convex: classify_convexity(d.boundary(), tol).class != ConvexityClass::NotWeaklyConvex,
        r: d.r(),
        diagonal_positive: (0..lm.dim()).all(|i| lm.entries[i][i] > 0.0),
        positive_definite: min_eigenvalue > tol.rank_tol * scale,
        eigenvalues: lm.eigenvalues,
        min_eigenvalue,
        rigid,
    })
}

/// One trial, regenerated from `(config.seed, trial)` alone. `Ok(Err(..))`
/// is a skipped trial; invariant violations propagate.
pub fn probe_trial(
    config: &ProbeConfig,
    trial: usize,
    tol: &Tolerance,
) -> Result<std::result::Result<ProbeInstance, String>> {
    if config.families.is_empty() {
        return Err(Error::Precondition("no probe families".into()));
    }
    let family = config.families[trial % config.families.len()];
    let seed = trial_seed(config.seed, trial as u64);
    let mut rng = trial_rng(config.seed, trial as u64);
    let n = rng.random_range(config.min_vertices..=config.max_vertices);
    let d = match decomposition_for(&mut rng, family, n, tol) {
        Ok(d) => d,
        Err(e) => return Ok(Err(skip_reason(&e))),
    };
    if d.r() == 0 {
        return Ok(Err("no interior edges".into()));
    }
    match evaluate(trial, seed, family, &d, tol) {
        Ok(inst) => Ok(Ok(inst)),
        Err(e @ Error::InvariantViolation(_)) => Err(e),
        Err(e) => Ok(Err(skip_reason(&e))),
    }
}

fn skip_reason(e: &Error) -> String {
    // group by error kind, not by the numbers in the message
    let s = e.to_string();
    s.split(':').next().unwrap_or(&s).to_string()
}

pub fn pd_probe(config: &ProbeConfig, tol: &Tolerance) -> Result<ProbeReport> {
    if config.min_vertices < 4 || config.max_vertices < config.min_vertices {
        return Err(Error::Precondition("vertex range must satisfy 4 <= min <= max".into()));
    }
    let mut instances = Vec::new();
    let mut skipped = BTreeMap::new();
    for trial in 0..config.trials {
        match probe_trial(config, trial, tol)? {
            Ok(inst) => instances.push(inst),
            Err(reason) => *skipped.entry(reason).or_insert(0) += 1,
        }
    }
    let convex: Vec<&ProbeInstance> = instances.iter().filter(|i| i.weakly_convex).collect();
    let mins: Vec<f64> = convex.iter().map(|i| i.min_eigenvalue).collect();
    let diag = convex.iter().filter(|i| i.diagonal_positive).count();
    Ok(ProbeReport {
        config: config.clone(),
        tolerances: *tol,
        attempted: config.trials,
        weakly_convex_count: convex.len(),
        min_eigenvalue_quantiles: Quantiles::of(&mins),
        diagonal_positive_rate: if convex.is_empty() { 0.0 } else { diag as f64 / convex.len() as f64 },
        non_pd_weakly_convex: convex.iter().filter(|i| !i.positive_definite).map(|i| (*i).clone()).collect(),
        non_pd_controls: instances.iter().filter(|i| !i.weakly_convex && !i.positive_definite).count(),
        instances,
        skipped,
    })
}

/// Recomputes an instance from its stored vertices and tetrahedra.
pub fn replay_instance(inst: &ProbeInstance, tol: &Tolerance) -> Result<ProbeInstance> {
    let v: Vec<Point3> = inst.vertices.iter().map(|p| Point3::new(p[0], p[1], p[2])).collect();
    let d = Decomposition::from_tetrahedra(v, inst.tetrahedra.clone(), tol)?;
    evaluate(inst.trial, inst.trial_seed, inst.family, &d, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suspension::fixtures::octahedron_suspension;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn octahedron_min_eigenvalue() {
        let d = Decomposition::of_suspension(&octahedron_suspension(), &tol()).unwrap();
        let inst = evaluate(0, 0, ProbeFamily::Suspension, &d, &tol()).unwrap();
        assert!((inst.min_eigenvalue - 4.0).abs() < 1e-9);
        assert!(inst.positive_definite && inst.weakly_convex && inst.rigid);
    }

    #[test]
    fn deterministic_and_replayable() {
        let cfg = ProbeConfig { seed: 9, trials: 24, ..ProbeConfig::default() };
        let a = pd_probe(&cfg, &tol()).unwrap();
        let b = pd_probe(&cfg, &tol()).unwrap();
        assert_eq!(a, b);
        assert!(a.instances.len() > 12, "{:?}", a.skipped);
        for inst in &a.instances {
            assert_eq!(&replay_instance(inst, &tol()).unwrap(), inst);
            let again = probe_trial(&cfg, inst.trial, &tol()).unwrap().unwrap();
            assert_eq!(&again, inst);
        }
        let json = serde_json::to_string(&a).unwrap();
        let back: ProbeReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }
}
