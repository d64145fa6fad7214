use super::{cyclic_changes, PlanarEmbedding, Sign};
use crate::error::{Error, Result};

const LIMIT: usize = 14;

/// Exhaustive search for a `+`/`-` labeling of the edges such that no vertex
/// sees a single sign and at most three vertices see fewer than four sign
/// changes. Returns the first such labeling (in the embedding's edge order),
/// or `None` when there is none.
pub fn topo_lemma_witness_search(g: &PlanarEmbedding) -> Result<Option<Vec<Sign>>> {
    let edges = g.edges();
    let e = edges.len();
    if e > LIMIT {
        return Err(Error::TooLarge { edges: e, limit: LIMIT });
    }
    // per vertex, the edge index of each neighbour in rotation order
    let incident: Vec<Vec<usize>> = g
        .rotation
        .iter()
        .enumerate()
        .map(|(v, nb)| nb.iter().map(|&w| edges.binary_search(&(v.min(w), v.max(w))).expect("edge listed")).collect())
        .collect();
    let mut around = Vec::new();
    for mask in 0u32..(1u32 << e) {
        let sign = |k: usize| if mask >> k & 1 == 1 { Sign::Plus } else { Sign::Minus };
        let mut few = 0;
        let mut ok = true;
        for inc in incident.iter().filter(|inc| !inc.is_empty()) {
            around.clear();
            around.extend(inc.iter().map(|&k| sign(k)));
            let changes = cyclic_changes(&around);
            if changes == 0 {
                ok = false;
                break;
            }
            if changes < 4 {
                few += 1;
                if few > 3 {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(Some((0..e).map(sign).collect()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::surface::fixtures::{icosahedron, octahedron, regular_tetrahedron};

    #[test]
    fn tetrahedron_and_octahedron_have_no_witness() {
        for s in [regular_tetrahedron(), octahedron()] {
            let g = PlanarEmbedding::from_surface(&s);
            assert_eq!(topo_lemma_witness_search(&g).unwrap(), None);
        }
    }

    #[test]
    fn subdivided_k4() {
        // K4 on 0..4 with edge (0, 1) subdivided by vertex 4
        let rot = vec![vec![4, 2, 3], vec![4, 3, 2], vec![0, 1, 3], vec![0, 2, 1], vec![0, 1]];
        let g = PlanarEmbedding::from_rotation(rot).unwrap();
        assert_eq!(g.num_edges(), 7);
        assert_eq!(topo_lemma_witness_search(&g).unwrap(), None);
    }

    #[test]
    fn too_large() {
        let g = PlanarEmbedding::from_surface(&icosahedron());
        assert_eq!(topo_lemma_witness_search(&g), Err(Error::TooLarge { edges: 30, limit: 14 }));
    }
}
