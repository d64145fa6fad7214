use super::{build_suspension, Suspension};
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::hessian::Decomposition;
use crate::tol::Tolerance;

/// The union of the tetrahedra around the single interior edge of `d`, as a
/// suspension with the edge's endpoints as poles.
pub fn interior_edge_star(d: &Decomposition, tol: &Tolerance) -> Result<Suspension> {
    if d.r() != 1 {
        return Err(Error::Precondition(format!("decomposition has {} interior edges; need exactly one", d.r())));
    }
    edge_star(d.vertices(), d.tetrahedra(), d.interior_edges()[0], tol)
}

/// Suspension formed by the tetrahedra containing `(a, b)`; their link
/// around the edge must be one closed cycle.
pub fn edge_star(
    vertices: &[Point3],
    tets: &[[usize; 4]],
    (a, b): (usize, usize),
    tol: &Tolerance,
) -> Result<Suspension> {
    let around: Vec<[usize; 2]> = tets
        .iter()
        .filter(|t| t.contains(&a) && t.contains(&b))
        .map(|t| {
            let o: Vec<usize> = t.iter().cloned().filter(|&v| v != a && v != b).collect();
            [o[0], o[1]]
        })
        .collect();
    let open = |why: &str| {
        Error::InvalidDecomposition(format!(
            "the {} tetrahedra around ({a}, {b}) do not form a closed cycle: {why}",
            around.len()
        ))
    };
    if around.len() < 3 {
        return Err(open("fewer than three"));
    }
    let mut cycle = vec![around[0][0], around[0][1]];
    let mut used = vec![false; around.len()];
    used[0] = true;
    loop {
        let last = *cycle.last().expect("non-empty");
        let Some(k) = (0..around.len()).find(|&k| !used[k] && around[k].contains(&last)) else {
            break;
        };
        used[k] = true;
        let next = if around[k][0] == last { around[k][1] } else { around[k][0] };
        if next == cycle[0] {
            break;
        }
        if cycle.contains(&next) {
            return Err(open("the link revisits a vertex"));
        }
        cycle.push(next);
    }
    if used.iter().any(|u| !u) || cycle.len() != around.len() {
        return Err(open("the link is not a single cycle"));
    }
    let last = *cycle.last().expect("non-empty");
    if !around.iter().any(|p| p.contains(&last) && p.contains(&cycle[0])) {
        return Err(open("the link does not close"));
    }
    // canonical order: smallest index first, then its smaller neighbour
    let m = (0..cycle.len()).min_by_key(|&k| cycle[k]).expect("non-empty");
    cycle.rotate_left(m);
    if cycle[cycle.len() - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    build_suspension(vertices[a], vertices[b], cycle.iter().map(|&v| vertices[v]).collect(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessian::decompose_star;
    use crate::suspension::fixtures::octahedron_suspension;
    use crate::suspension::suspension_rigidity;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn octahedron_recovers_itself() {
        let o = octahedron_suspension();
        let d = Decomposition::of_suspension(&o, &tol()).unwrap();
        let s = interior_edge_star(&d, &tol()).unwrap();
        assert_eq!(s.surface().canonical_faces(), o.surface().canonical_faces());
        assert_eq!(s.vertices(), o.vertices());
        assert!(suspension_rigidity(&s, &tol()).unwrap());
    }

    #[test]
    fn two_tetrahedra_do_not_close() {
        let o = octahedron_suspension();
        let v = o.vertices();
        let e = edge_star(v, &[[0, 1, 2, 3], [0, 1, 3, 4]], (0, 1), &tol());
        assert!(matches!(e, Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn open_fan_is_rejected() {
        let o = octahedron_suspension();
        let v = o.vertices();
        let e = edge_star(v, &[[0, 1, 2, 3], [0, 1, 3, 4], [0, 1, 4, 5]], (0, 1), &tol());
        assert!(e.is_err());
    }

    #[test]
    fn glued_blocks() {
        // two square pyramids glued along their base form an octahedron with
        // a different apex choice; a star from an equator vertex has one
        // interior edge to the opposite equator vertex
        let o = octahedron_suspension();
        let d = decompose_star(o.surface(), 2, &tol()).unwrap();
        assert_eq!(d.interior_edges(), &[(2, 4)]);
        let s = interior_edge_star(&d, &tol()).unwrap();
        assert_eq!(s.n(), 4);
        assert!(suspension_rigidity(&s, &tol()).unwrap());
        let big = decompose_star(&crate::geometry::surface::fixtures::icosahedron(), 0, &tol()).unwrap();
        assert!(matches!(interior_edge_star(&big, &tol()), Err(Error::Precondition(_))));
    }
}
