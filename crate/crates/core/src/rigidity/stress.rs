use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{is_infinitesimally_rigid, rigidity_matrix, EdgeKind, Framework, Motion};
use crate::error::{Error, Result};
use crate::linalg::{left_null_space, orient_by_largest};
use crate::tol::Tolerance;

/// One scalar per framework edge, in the framework's edge order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stress {
    pub omega: Vec<f64>,
}

impl Stress {
    pub fn new(omega: Vec<f64>) -> Self {
        Stress { omega }
    }

    pub fn max_abs(&self) -> f64 {
        self.omega.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    /// Scaled so the largest magnitude is 1, signs kept.
    pub fn normalized_max(&self) -> Stress {
        let m = self.max_abs();
        if m == 0.0 {
            return self.clone();
        }
        Stress::new(self.omega.iter().map(|w| w / m).collect())
    }

    pub fn scaled(&self, t: f64) -> Stress {
        Stress::new(self.omega.iter().map(|w| w * t).collect())
    }

    pub fn neg(&self) -> Stress {
        self.scaled(-1.0)
    }

    fn check(&self, fw: &Framework) -> Result<()> {
        if self.omega.len() != fw.num_edges() {
            return Err(Error::SizeMismatch { expected: fw.num_edges(), got: self.omega.len() });
        }
        Ok(())
    }
}

/// Orthonormal basis of the equilibrium stresses, each signed so its entry of
/// largest magnitude is positive.
pub fn equilibrium_stress_space(fw: &Framework, tol: &Tolerance) -> Vec<Stress> {
    if fw.num_edges() == 0 {
        return Vec::new();
    }
    let lns = left_null_space(&rigidity_matrix(fw), tol.rank_tol);
    (0..lns.ncols())
        .map(|c| {
            let mut v: DVector<f64> = lns.column(c).into_owned();
            orient_by_largest(&mut v);
            Stress::new(v.iter().cloned().collect())
        })
        .collect()
}

/// Largest norm over vertices of `sum_j w_ij (p_i - p_j)`.
pub fn equilibrium_residual(fw: &Framework, s: &Stress) -> Result<f64> {
    s.check(fw)?;
    let r = rigidity_matrix(fw);
    let force = r.transpose() * DVector::from_column_slice(&s.omega);
    Ok((0..fw.num_vertices()).map(|i| force.rows(3 * i, 3).norm()).fold(0.0, f64::max))
}

/// Cables carry `>= 0`, struts `<= 0`, with slack `1e-12`; bars are free.
pub fn is_proper(fw: &Framework, s: &Stress) -> Result<bool> {
    Ok(first_improper(fw, s)?.is_none())
}

fn first_improper(fw: &Framework, s: &Stress) -> Result<Option<(usize, usize, f64)>> {
    s.check(fw)?;
    const SLACK: f64 = 1e-12;
    Ok(fw
        .edges()
        .iter()
        .zip(&s.omega)
        .find(|(&(_, _, kind), &w)| match kind {
            EdgeKind::Bar => false,
            EdgeKind::Cable => w < -SLACK,
            EdgeKind::Strut => w > SLACK,
        })
        .map(|(&(i, j, _), &w)| (i, j, w)))
}

/// `sum w_ij (p_i - p_j) . (p'_i - p'_j)`; zero for every motion exactly when
/// `s` is an equilibrium stress.
pub fn stress_energy(fw: &Framework, s: &Stress, m: &Motion) -> Result<f64> {
    s.check(fw)?;
    if m.len() != fw.num_vertices() {
        return Err(Error::SizeMismatch { expected: fw.num_vertices(), got: m.len() });
    }
    let p = fw.vertices();
    let v = &m.velocities;
    Ok(fw.edges().iter().zip(&s.omega).map(|(&(i, j, _), w)| w * (p[i] - p[j]).dot(&(v[i] - v[j]))).sum())
}

/// Rigidity of the bar framework with `removed_edge` deleted, after checking
/// that `s` is a proper equilibrium stress that is non-zero on that edge and
/// that the full bar framework is rigid.
pub fn exchange_rigidity_check(fw: &Framework, s: &Stress, removed_edge: usize, tol: &Tolerance) -> Result<bool> {
    s.check(fw)?;
    if removed_edge >= fw.num_edges() {
        return Err(Error::Precondition(format!("edge {removed_edge} out of range")));
    }
    let scale = s.max_abs() * crate::geometry::diameter(fw.vertices());
    let residual = equilibrium_residual(fw, s)?;
    if !(residual <= 1e-9 * scale.max(f64::MIN_POSITIVE)) || scale == 0.0 {
        return Err(Error::NotEquilibrium { residual });
    }
    if let Some((i, j, value)) = first_improper(fw, s)? {
        return Err(Error::NotProper { i, j, value });
    }
    let (i, j, _) = fw.edges()[removed_edge];
    if s.omega[removed_edge].abs() <= tol.rank_tol * s.max_abs() {
        return Err(Error::ZeroStressOnEdge { i, j });
    }
    let bars = fw.all_bars();
    if !is_infinitesimally_rigid(&bars, tol)? {
        return Err(Error::Precondition("the bar framework is not infinitesimally rigid".into()));
    }
    is_infinitesimally_rigid(&bars.without_edge(removed_edge), tol)
}
