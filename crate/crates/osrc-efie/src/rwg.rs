//! Edge-based div-conforming degrees of freedom: the RWG space and its
//! normal-rotated (SNC) companion.
//!
//! The basis attached to edge i is
//! `phi_i(r) = (r - p_+)/(2 A_+)` on `T_+`, `-(r - p_-)/(2 A_-)` on `T_-`,
//! zero elsewhere, exactly as printed (no edge-length prefactor), with
//! `div phi_i = +-1/A_+-` on the two triangles. SNC functions are
//! `phi_i x nu` and are surface-curl conforming with
//! `curl (phi_i x nu) = -div phi_i`.

use nalgebra::Vector3;

use crate::mesh::TriangleMesh;
use crate::{Error, Result};

/// One RWG degree of freedom.
#[derive(Debug, Clone, Copy)]
pub struct RwgEdge {
    /// Endpoints, ordered as traversed by the plus triangle.
    pub vertices: [usize; 2],
    pub tri_plus: usize,
    pub tri_minus: usize,
    /// Vertex of `tri_plus` opposite the edge.
    pub opp_plus: usize,
    /// Vertex of `tri_minus` opposite the edge.
    pub opp_minus: usize,
    pub length: f64,
}

/// A dof supported on some triangle: its edge index, the opposite vertex and
/// the sign (+1 on the plus triangle).
#[derive(Debug, Clone, Copy)]
pub struct LocalDof {
    pub edge: usize,
    pub opposite: usize,
    pub sign: f64,
}

/// The RWG space of a closed mesh: one dof per edge.
#[derive(Debug, Clone)]
pub struct RwgSpace {
    pub edges: Vec<RwgEdge>,
    tri_dofs: Vec<Vec<LocalDof>>,
}

impl RwgSpace {
    pub fn build(mesh: &TriangleMesh) -> Result<Self> {
        use std::collections::HashMap;
        // map undirected edge -> (plus triangle, minus triangle, opposite vertices)
        struct Half {
            plus: Option<(usize, usize)>,
            minus: Option<(usize, usize)>,
            a: usize,
            b: usize,
        }
        let mut table: HashMap<(usize, usize), Half> = HashMap::new();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let opp = tri[(k + 2) % 3];
                let key = (a.min(b), a.max(b));
                let entry = table.entry(key).or_insert(Half { plus: None, minus: None, a, b });
                // the triangle traversing (a,b) in the canonical (low,high)
                // direction is the plus triangle
                if (a, b) == key {
                    if entry.plus.replace((t, opp)).is_some() {
                        return Err(Error::Topology(format!("edge {key:?} has two plus triangles")));
                    }
                } else if entry.minus.replace((t, opp)).is_some() {
                    return Err(Error::Topology(format!("edge {key:?} has two minus triangles")));
                }
            }
        }
        let mut keys: Vec<(usize, usize)> = table.keys().copied().collect();
        keys.sort_unstable();
        let mut edges = Vec::with_capacity(keys.len());
        let mut tri_dofs = vec![Vec::new(); mesh.triangle_count()];
        for key in keys {
            let h = &table[&key];
            let (tp, op) = h.plus.ok_or_else(|| {
                Error::Topology(format!("edge {key:?} has no positively oriented triangle"))
            })?;
            let (tm, om) = h.minus.ok_or_else(|| {
                Error::Topology(format!("edge {key:?} has no negatively oriented triangle"))
            })?;
            let idx = edges.len();
            let length = (mesh.vertices[key.0] - mesh.vertices[key.1]).norm();
            edges.push(RwgEdge {
                vertices: [key.0, key.1],
                tri_plus: tp,
                tri_minus: tm,
                opp_plus: op,
                opp_minus: om,
                length,
            });
            tri_dofs[tp].push(LocalDof { edge: idx, opposite: op, sign: 1.0 });
            tri_dofs[tm].push(LocalDof { edge: idx, opposite: om, sign: -1.0 });
        }
        Ok(Self { edges, tri_dofs })
    }

    pub fn dof_count(&self) -> usize {
        self.edges.len()
    }

    /// The (up to three) dofs supported on triangle t.
    pub fn dofs_on(&self, t: usize) -> &[LocalDof] {
        &self.tri_dofs[t]
    }

    /// phi_i at a point of triangle t (0 if the dof does not live there).
    pub fn eval(&self, mesh: &TriangleMesh, edge: usize, t: usize, r: Vector3<f64>) -> Vector3<f64> {
        for dof in &self.tri_dofs[t] {
            if dof.edge == edge {
                return dof.sign / (2.0 * mesh.area(t)) * (r - mesh.vertices[dof.opposite]);
            }
        }
        Vector3::zeros()
    }

    /// Surface divergence of phi_i on triangle t (0 off support).
    pub fn div(&self, mesh: &TriangleMesh, edge: usize, t: usize) -> f64 {
        for dof in &self.tri_dofs[t] {
            if dof.edge == edge {
                return dof.sign / mesh.area(t);
            }
        }
        0.0
    }

    /// The rotated (SNC) function phi_i x nu on triangle t.
    pub fn eval_snc(&self, mesh: &TriangleMesh, edge: usize, t: usize, r: Vector3<f64>) -> Vector3<f64> {
        self.eval(mesh, edge, t, r).cross(&mesh.normal(t))
    }

    /// Surface curl of the SNC function on triangle t:
    /// `curl (phi x nu) = -div phi`.
    pub fn curl_snc(&self, mesh: &TriangleMesh, edge: usize, t: usize) -> f64 {
        -self.div(mesh, edge, t)
    }
}

/// Evaluate a local dof's basis function directly (assembly fast path).
#[inline]
pub fn local_eval(mesh: &TriangleMesh, t: usize, dof: &LocalDof, r: Vector3<f64>) -> Vector3<f64> {
    dof.sign / (2.0 * mesh.area(t)) * (r - mesh.vertices[dof.opposite])
}

/// Surface divergence of a local dof on its triangle.
#[inline]
pub fn local_div(mesh: &TriangleMesh, t: usize, dof: &LocalDof) -> f64 {
    dof.sign / mesh.area(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::icosphere;
    use approx::assert_relative_eq;

    #[test]
    fn one_dof_per_edge() {
        let mesh = icosphere(1, 1.0).unwrap();
        let space = RwgSpace::build(&mesh).unwrap();
        assert_eq!(space.dof_count(), mesh.edge_count());
        for t in 0..mesh.triangle_count() {
            assert_eq!(space.dofs_on(t).len(), 3);
        }
    }

    #[test]
    fn divergence_matches_printed_formula() {
        let mesh = icosphere(0, 1.0).unwrap();
        let space = RwgSpace::build(&mesh).unwrap();
        let e = &space.edges[7];
        assert_relative_eq!(
            space.div(&mesh, 7, e.tri_plus),
            1.0 / mesh.area(e.tri_plus),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            space.div(&mesh, 7, e.tri_minus),
            -1.0 / mesh.area(e.tri_minus),
            max_relative = 1e-14
        );
        // integral of div over T+ is +1
        assert_relative_eq!(
            space.div(&mesh, 7, e.tri_plus) * mesh.area(e.tri_plus),
            1.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn normal_component_continuous_across_edge() {
        let mesh = icosphere(1, 1.0).unwrap();
        let space = RwgSpace::build(&mesh).unwrap();
        for (i, e) in space.edges.iter().enumerate().step_by(17) {
            let mid = 0.5 * (mesh.vertices[e.vertices[0]] + mesh.vertices[e.vertices[1]]);
            let edge_dir = (mesh.vertices[e.vertices[1]] - mesh.vertices[e.vertices[0]]).normalize();
            // in-plane outward normals of the edge within each triangle
            let np = edge_dir.cross(&mesh.normal(e.tri_plus));
            let np = if np.dot(&(mid - mesh.centroid(e.tri_plus))) > 0.0 { np } else { -np };
            let nm = edge_dir.cross(&mesh.normal(e.tri_minus));
            let nm = if nm.dot(&(mid - mesh.centroid(e.tri_minus))) > 0.0 { nm } else { -nm };
            let fp = space.eval(&mesh, i, e.tri_plus, mid).dot(&np);
            let fm = space.eval(&mesh, i, e.tri_minus, mid).dot(&nm);
            // flux leaving T+ equals flux entering T-, both 1/length
            assert_relative_eq!(fp, -fm, max_relative = 1e-10);
            assert_relative_eq!(fp.abs(), 1.0 / e.length, max_relative = 1e-10);
        }
    }

    #[test]
    fn vanishes_off_support() {
        let mesh = icosphere(1, 1.0).unwrap();
        let space = RwgSpace::build(&mesh).unwrap();
        let e = &space.edges[0];
        let far = (0..mesh.triangle_count())
            .find(|&t| t != e.tri_plus && t != e.tri_minus)
            .unwrap();
        let r = mesh.centroid(far);
        assert_eq!(space.eval(&mesh, 0, far, r), Vector3::zeros());
        assert_eq!(space.div(&mesh, 0, far), 0.0);
    }
}
