//! Proper equilibrium stress of a tensegrity suspension, built by removing
//! one reflex equator vertex at a time and gluing back the stress of the
//! five-point framework on that vertex, its two neighbours and the poles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{is_ns_decomposable, reflex_lateral_edges, tensegrity_labeling, Suspension, NORTH, SOUTH};
use crate::error::{Error, Result};
use crate::geometry::{classify_convexity, diameter, ConvexityClass, Point3};
use crate::rigidity::{
    equilibrium_residual, equilibrium_stress_space, exchange_rigidity_check, is_infinitesimally_rigid, is_proper,
    EdgeKind, Framework, Stress,
};
use crate::tol::Tolerance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InductiveStress {
    /// `tensegrity_labeling(s, true)`.
    #[serde(skip)]
    pub framework: Option<Framework>,
    /// Normalized so the largest magnitude is 1.
    pub stress: Stress,
    /// Some step had no admissible reflex vertex and fell back to the
    /// null-space solver on the remaining suspension.
    pub fallback: bool,
    pub steps: Vec<String>,
}

type Pair = (usize, usize);
type StressMap = BTreeMap<Pair, f64>;

fn key(a: usize, b: usize) -> Pair {
    (a.min(b), a.max(b))
}

/// Equilibrium stress of `fw` with the largest component on `(a, b)` in the
/// stress space, signed positive there.
fn stress_favouring(fw: &Framework, a: usize, b: usize, tol: &Tolerance) -> Result<Stress> {
    let space = equilibrium_stress_space(fw, tol);
    let k = fw.edge_index(a, b).ok_or_else(|| Error::Precondition(format!("no edge ({a}, {b})")))?;
    if space.is_empty() {
        return Err(Error::Degenerate("no equilibrium stress".into()));
    }
    let mut omega = vec![0.0; fw.num_edges()];
    for s in &space {
        let c = s.omega[k];
        for (o, w) in omega.iter_mut().zip(&s.omega) {
            *o += c * w;
        }
    }
    let s = Stress::new(omega);
    if !(s.omega[k] > tol.rank_tol * s.max_abs().max(f64::MIN_POSITIVE)) {
        return Err(Error::Degenerate(format!("every equilibrium stress vanishes on ({a}, {b})")));
    }
    Ok(s.normalized_max())
}

/// Null-space stress of the tensegrity on the kept equator vertices, keyed by
/// original vertex ids.
fn null_space_solution(s: &Suspension, keep: &[usize], tol: &Tolerance) -> Result<StressMap> {
    let sub = s.sub_suspension(keep, tol)?;
    let fw = tensegrity_labeling(&sub, true);
    let st = stress_favouring(&fw, NORTH, SOUTH, tol)?;
    let id = |local: usize| if local < 2 { local } else { 2 + keep[local - 2] };
    Ok(fw.edges().iter().zip(&st.omega).map(|(&(i, j, _), &w)| (key(id(i), id(j)), w)).collect())
}

/// Stress of the complete graph on `ids` (five points), with zero on
/// `(x, y)` when the stress space is two-dimensional.
fn small_stress(points: &[Point3], ids: [usize; 5], x: usize, y: usize, tol: &Tolerance) -> Result<StressMap> {
    let mut edges = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            edges.push((a, b, EdgeKind::Bar));
        }
    }
    let fw = Framework::with_tolerance(ids.iter().map(|&i| points[i]).collect(), edges, tol)?;
    let space = equilibrium_stress_space(&fw, tol);
    let pos = |v: usize| ids.iter().position(|&i| i == v).expect("id present");
    let kxy = fw.edge_index(pos(x), pos(y)).expect("complete graph");
    let omega = match space.len() {
        1 => space[0].omega.clone(),
        2 => {
            let (b1, b2) = (&space[0].omega, &space[1].omega);
            b1.iter().zip(b2).map(|(u, v)| b2[kxy] * u - b1[kxy] * v).collect()
        }
        d => return Err(Error::Degenerate(format!("five-point stress space of dimension {d}"))),
    };
    Ok(fw.edges().iter().zip(omega).map(|(&(i, j, _), w)| (key(ids[i], ids[j]), w)).collect())
}

fn solve(
    s: &Suspension,
    keep: &[usize],
    tol: &Tolerance,
    steps: &mut Vec<String>,
    fallback: &mut bool,
) -> Result<StressMap> {
    let sub = s.sub_suspension(keep, tol)?;
    let reflex = if keep.len() == 3 { Vec::new() } else { reflex_lateral_edges(&sub, tol)? };
    if reflex.is_empty() {
        steps.push(format!("base: convex suspension on equator {keep:?}, null-space stress"));
        return null_space_solution(s, keep, tol);
    }
    let m = keep.len();
    for &(pole, local) in &reflex {
        let k = local - 2;
        let (prev, cur, next) = (keep[(k + m - 1) % m], keep[k], keep[(k + 1) % m]);
        let reduced: Vec<usize> = keep.iter().cloned().filter(|&i| i != cur).collect();
        let Ok(r) = s.sub_suspension(&reduced, tol) else {
            continue;
        };
        if !is_ns_decomposable(&r, tol).decomposable {
            steps.push(format!("skip reflex edge at p{cur}: reduced suspension is not N-S decomposable"));
            continue;
        }
        let (x, y) = (pole, if pole == NORTH { SOUTH } else { NORTH });
        let small = match small_stress(s.vertices(), [x, y, 2 + prev, 2 + cur, 2 + next], x, y, tol) {
            Ok(v) => v,
            Err(e) => {
                steps.push(format!("skip reflex edge at p{cur}: {e}"));
                continue;
            }
        };
        let chord = key(2 + prev, 2 + next);
        let ws = small[&chord];
        if !(ws.abs() > tol.rank_tol * small.values().fold(0.0f64, |a, w| a.max(w.abs()))) {
            steps.push(format!("skip reflex edge at p{cur}: small stress vanishes on the chord"));
            continue;
        }
        steps.push(format!(
            "remove p{cur} (reflex lateral edge at {}), chord ({prev}, {next})",
            if pole == NORTH { "N" } else { "S" }
        ));
        let mut big = solve(s, &reduced, tol, steps, fallback)?;
        let wb = big.get(&chord).copied().unwrap_or(0.0);
        let c = -wb / ws;
        steps.push(format!("p{cur}: chord stress {wb:.6e} cancelled with scale {c:.6e}"));
        for (e, w) in small {
            *big.entry(e).or_insert(0.0) += c * w;
        }
        return Ok(big);
    }
    steps.push(format!("fallback: no admissible reflex vertex on equator {keep:?}"));
    *fallback = true;
    null_space_solution(s, keep, tol)
}

/// Proper equilibrium stress on `tensegrity_labeling(s, true)` for an N-S
/// decomposable weakly strictly convex suspension.
pub fn inductive_proper_stress(s: &Suspension, tol: &Tolerance) -> Result<InductiveStress> {
    let d = is_ns_decomposable(s, tol);
    if !d.decomposable {
        return Err(Error::Precondition(format!("not N-S decomposable: {}", d.diagnostic)));
    }
    if classify_convexity(s.surface(), tol).class == ConvexityClass::NotWeaklyConvex {
        return Err(Error::Precondition("not weakly convex".into()));
    }
    let mut steps = Vec::new();
    let mut fallback = false;
    let keep: Vec<usize> = (0..s.n()).collect();
    let map = solve(s, &keep, tol, &mut steps, &mut fallback)?;

    let fw = tensegrity_labeling(s, true);
    let omega: Vec<f64> = fw.edges().iter().map(|&(i, j, _)| map.get(&key(i, j)).copied().unwrap_or(0.0)).collect();
    let raw = Stress::new(omega);
    let scale = raw.max_abs();
    let trace = |msg: String| Error::InvariantViolation(format!("{msg}; trace: {}", steps.join(" | ")));
    if !(scale > 0.0) {
        return Err(trace("zero stress".into()));
    }
    for (&(i, j), &w) in &map {
        if fw.edge_index(i, j).is_none() && w.abs() > 1e-9 * scale {
            return Err(trace(format!("chord ({i}, {j}) keeps stress {w:e}")));
        }
    }
    let stress = raw.normalized_max();
    let residual = equilibrium_residual(&fw, &stress)?;
    if residual > 1e-9 * diameter(s.vertices()).max(1.0) {
        return Err(trace(format!("equilibrium residual {residual:e}")));
    }
    if !is_proper(&fw, &stress)? {
        return Err(trace("the glued stress is not proper".into()));
    }
    Ok(InductiveStress { framework: Some(fw), stress, fallback, steps })
}

/// Rank verdict for the all-bars suspension surface. When the suspension is
/// N-S decomposable and weakly convex, the verdict is cross-checked against
/// the exchange argument applied to the inductive stress.
pub fn suspension_rigidity(s: &Suspension, tol: &Tolerance) -> Result<bool> {
    let rigid = is_infinitesimally_rigid(&Framework::from_surface(s.surface()), tol)?;
    let d = is_ns_decomposable(s, tol);
    if !d.decomposable || classify_convexity(s.surface(), tol).class == ConvexityClass::NotWeaklyConvex {
        return Ok(rigid);
    }
    let ind = inductive_proper_stress(s, tol)?;
    let fw = ind.framework.as_ref().expect("set by the construction");
    let ns = fw.edge_index(NORTH, SOUTH).expect("axis edge");
    match exchange_rigidity_check(fw, &ind.stress, ns, tol) {
        Ok(v) if v == rigid => Ok(rigid),
        Ok(v) => Err(Error::InvariantViolation(format!("rank test says rigid = {rigid}, exchange argument says {v}"))),
        // with the axis in, the framework is not rigid: nothing to exchange
        Err(Error::Precondition(_)) | Err(Error::ZeroStressOnEdge { .. }) => Ok(rigid),
        Err(e) => Err(Error::InvariantViolation(format!("exchange check failed: {e}"))),
    }
}
