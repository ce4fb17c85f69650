//! Closed oriented triangle meshes: icosphere generation, file readers,
//! and the density statistics the solver configuration needs.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::Vector3;
use serde::Serialize;

use crate::{Error, Result};

/// A closed, consistently oriented triangulated surface with cached
/// per-triangle areas and unit outward normals.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    pub vertices: Vec<Vector3<f64>>,
    pub triangles: Vec<[usize; 3]>,
    areas: Vec<f64>,
    normals: Vec<Vector3<f64>>,
}

/// Density statistics relative to a wavenumber.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeshStats {
    pub h_max: f64,
    pub h_avg: f64,
    pub points_per_wavelength: f64,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
    pub total_area: f64,
}

impl TriangleMesh {
    /// Build and validate: positive areas, every edge shared by exactly two
    /// triangles traversing it in opposite directions.
    pub fn new(vertices: Vec<Vector3<f64>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::Topology("mesh has no triangles".into()));
        }
        let nv = vertices.len();
        let mut areas = Vec::with_capacity(triangles.len());
        let mut normals = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= nv {
                    return Err(Error::Topology(format!("triangle {t} references vertex {v} out of range")));
                }
            }
            let [a, b, c] = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
            let n = (b - a).cross(&(c - a));
            let double_area = n.norm();
            if double_area <= 0.0 || !double_area.is_finite() {
                return Err(Error::Topology(format!("triangle {t} is degenerate")));
            }
            areas.push(0.5 * double_area);
            normals.push(n / double_area);
        }
        // directed-edge census: closed orientable manifold iff every directed
        // edge appears exactly once and its reverse exactly once
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let e = (tri[k], tri[(k + 1) % 3]);
                if directed.insert(e, t).is_some() {
                    return Err(Error::Topology(format!(
                        "directed edge {:?} appears twice: inconsistent orientation or non-manifold",
                        e
                    )));
                }
            }
        }
        for (&(a, b), _) in &directed {
            if !directed.contains_key(&(b, a)) {
                return Err(Error::Topology(format!("edge ({a},{b}) is open: mesh is not closed")));
            }
        }
        Ok(Self { vertices, triangles, areas, normals })
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        // closed manifold: E = 3F/2
        3 * self.triangles.len() / 2
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    pub fn normal(&self, t: usize) -> Vector3<f64> {
        self.normals[t]
    }

    pub fn corners(&self, t: usize) -> [Vector3<f64>; 3] {
        let tri = self.triangles[t];
        [self.vertices[tri[0]], self.vertices[tri[1]], self.vertices[tri[2]]]
    }

    pub fn centroid(&self, t: usize) -> Vector3<f64> {
        let [a, b, c] = self.corners(t);
        (a + b + c) / 3.0
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Sum of signed-volume contributions; positive for outward orientation.
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|tri| {
                let [a, b, c] =
                    [self.vertices[tri[0]], self.vertices[tri[1]], self.vertices[tri[2]]];
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum()
    }

    /// Unique undirected edges as (low vertex, high vertex).
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|tri| {
                (0..3).map(move |k| {
                    let (a, b) = (tri[k], tri[(k + 1) % 3]);
                    (a.min(b), a.max(b))
                })
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn stats(&self, kappa: f64) -> MeshStats {
        let edges = self.undirected_edges();
        let mut h_max: f64 = 0.0;
        let mut sum = 0.0;
        for &(a, b) in &edges {
            let len = (self.vertices[a] - self.vertices[b]).norm();
            h_max = h_max.max(len);
            sum += len;
        }
        let h_avg = sum / edges.len() as f64;
        MeshStats {
            h_max,
            h_avg,
            points_per_wavelength: 2.0 * std::f64::consts::PI / (kappa * h_avg),
            vertex_count: self.vertices.len(),
            edge_count: edges.len(),
            triangle_count: self.triangles.len(),
            total_area: self.total_area(),
        }
    }
}

/// Icosahedron subdivided `subdivisions` times, vertices projected onto the
/// sphere of the given radius; 20 * 4^n triangles.
pub fn icosphere(subdivisions: u32, radius: f64) -> Result<TriangleMesh> {
    if subdivisions > 7 {
        return Err(Error::Parameter(format!(
            "icosphere subdivision {subdivisions} exceeds the supported maximum 7"
        )));
    }
    if radius <= 0.0 {
        return Err(Error::Parameter("icosphere radius must be positive".into()));
    }
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vector3<f64>> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .iter()
    .map(|v| Vector3::new(v[0], v[1], v[2]).normalize() * radius)
    .collect();
    // counter-clockwise seen from outside
    let mut triangles: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for tri in &triangles {
            let mut mid = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                mid[k] = *midpoint.entry(key).or_insert_with(|| {
                    let p = ((vertices[a] + vertices[b]) / 2.0).normalize() * radius;
                    vertices.push(p);
                    vertices.len() - 1
                });
            }
            next.push([tri[0], mid[0], mid[2]]);
            next.push([tri[1], mid[1], mid[0]]);
            next.push([tri[2], mid[2], mid[1]]);
            next.push([mid[0], mid[1], mid[2]]);
        }
        triangles = next;
    }
    TriangleMesh::new(vertices, triangles)
}

/// Read an OFF file (triangles only).
pub fn read_off(path: &Path) -> Result<TriangleMesh> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file)
        .lines()
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Format("empty OFF file".into()))?;
    if header != "OFF" {
        return Err(Error::Format(format!("expected OFF header, got '{header}'")));
    }
    let counts = lines.next().ok_or_else(|| Error::Format("missing OFF counts".into()))?;
    let c: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Format(format!("bad OFF count '{t}'"))))
        .collect::<Result<_>>()?;
    if c.len() < 2 {
        return Err(Error::Format("OFF counts line needs vertices and faces".into()));
    }
    let (nv, nf) = (c[0], c[1]);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let line = lines.next().ok_or_else(|| Error::Format("truncated OFF vertices".into()))?;
        let v: Vec<f64> = line
            .split_whitespace()
            .take(3)
            .map(|t| t.parse().map_err(|_| Error::Format(format!("bad coordinate '{t}'"))))
            .collect::<Result<_>>()?;
        if v.len() != 3 {
            return Err(Error::Format("OFF vertex needs 3 coordinates".into()));
        }
        vertices.push(Vector3::new(v[0], v[1], v[2]));
    }
    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let line = lines.next().ok_or_else(|| Error::Format("truncated OFF faces".into()))?;
        let f: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Format(format!("bad face index '{t}'"))))
            .collect::<Result<_>>()?;
        if f.is_empty() || f[0] != 3 || f.len() < 4 {
            return Err(Error::Format("only triangular OFF faces are supported".into()));
        }
        triangles.push([f[1], f[2], f[3]]);
    }
    TriangleMesh::new(vertices, triangles)
}

/// Write a mesh as OFF.
pub fn write_off(mesh: &TriangleMesh, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "OFF")?;
    writeln!(out, "{} {} {}", mesh.vertex_count(), mesh.triangle_count(), mesh.edge_count())?;
    for v in &mesh.vertices {
        writeln!(out, "{:.17e} {:.17e} {:.17e}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(out, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}

/// Read a Gmsh ASCII v2 file; only 3-node triangles (element type 2) are
/// kept, other element types are skipped.
pub fn read_msh(path: &Path) -> Result<TriangleMesh> {
    let file = std::fs::File::open(path)?;
    let lines: Vec<String> = BufReader::new(file).lines().collect::<std::io::Result<_>>()?;
    let mut i = 0;
    let mut node_ids: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    while i < lines.len() {
        match lines[i].trim() {
            "$MeshFormat" => {
                let ver = lines
                    .get(i + 1)
                    .ok_or_else(|| Error::Format("truncated $MeshFormat".into()))?;
                if !ver.trim().starts_with("2.") {
                    return Err(Error::Format(format!("unsupported Gmsh format '{}'", ver.trim())));
                }
                i += 1;
            }
            "$Nodes" => {
                let n: usize = lines
                    .get(i + 1)
                    .and_then(|l| l.trim().parse().ok())
                    .ok_or_else(|| Error::Format("bad $Nodes count".into()))?;
                for k in 0..n {
                    let parts: Vec<&str> = lines
                        .get(i + 2 + k)
                        .ok_or_else(|| Error::Format("truncated nodes".into()))?
                        .split_whitespace()
                        .collect();
                    if parts.len() < 4 {
                        return Err(Error::Format("node line needs id x y z".into()));
                    }
                    let id: usize =
                        parts[0].parse().map_err(|_| Error::Format("bad node id".into()))?;
                    let xyz: Vec<f64> = parts[1..4]
                        .iter()
                        .map(|t| t.parse().map_err(|_| Error::Format("bad node coordinate".into())))
                        .collect::<Result<_>>()?;
                    node_ids.insert(id, vertices.len());
                    vertices.push(Vector3::new(xyz[0], xyz[1], xyz[2]));
                }
                i += 1 + n;
            }
            "$Elements" => {
                let n: usize = lines
                    .get(i + 1)
                    .and_then(|l| l.trim().parse().ok())
                    .ok_or_else(|| Error::Format("bad $Elements count".into()))?;
                for k in 0..n {
                    let parts: Vec<&str> = lines
                        .get(i + 2 + k)
                        .ok_or_else(|| Error::Format("truncated elements".into()))?
                        .split_whitespace()
                        .collect();
                    if parts.len() < 3 {
                        continue;
                    }
                    let etype: usize = parts[1].parse().unwrap_or(0);
                    if etype != 2 {
                        continue; // not a 3-node triangle
                    }
                    let ntags: usize =
                        parts[2].parse().map_err(|_| Error::Format("bad tag count".into()))?;
                    let idx = &parts[3 + ntags..];
                    if idx.len() < 3 {
                        return Err(Error::Format("triangle element needs 3 nodes".into()));
                    }
                    let mut tri = [0usize; 3];
                    for (slot, t) in tri.iter_mut().zip(idx) {
                        let id: usize =
                            t.parse().map_err(|_| Error::Format("bad element node id".into()))?;
                        *slot = *node_ids
                            .get(&id)
                            .ok_or_else(|| Error::Format(format!("element references unknown node {id}")))?;
                    }
                    triangles.push(tri);
                }
                i += 1 + n;
            }
            _ => {}
        }
        i += 1;
    }
    TriangleMesh::new(vertices, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosahedron_counts() {
        let m = icosphere(0, 1.0).unwrap();
        assert_eq!(m.vertex_count(), 12);
        assert_eq!(m.triangle_count(), 20);
        assert_eq!(m.edge_count(), 30);
    }

    #[test]
    fn subdivision_counts_and_euler() {
        let m = icosphere(2, 1.0).unwrap();
        assert_eq!(m.triangle_count(), 320);
        assert_eq!(m.edge_count(), 480);
        let euler = m.vertex_count() as i64 - m.edge_count() as i64 + m.triangle_count() as i64;
        assert_eq!(euler, 2);
    }

    #[test]
    fn area_converges_to_sphere() {
        let exact = 4.0 * std::f64::consts::PI;
        let deficit = |n: u32| (exact - icosphere(n, 1.0).unwrap().total_area()) / exact;
        // measured deficits: 1.88e-2, 4.77e-3, 1.20e-3 — quartering per level
        assert!(deficit(4) < 1.3e-3, "n=4 deficit {}", deficit(4));
        for n in 2..4 {
            let ratio = deficit(n) / deficit(n + 1);
            assert!((ratio - 4.0).abs() < 0.2, "deficit ratio {ratio} at n={n}");
        }
    }

    #[test]
    fn outward_orientation() {
        for n in 0..4 {
            let m = icosphere(n, 1.0).unwrap();
            assert!(m.signed_volume() > 0.0);
        }
    }

    #[test]
    fn stats_scale_with_kappa() {
        let m = icosphere(3, 1.0).unwrap();
        let s1 = m.stats(std::f64::consts::PI);
        let s2 = m.stats(2.0 * std::f64::consts::PI);
        assert!((s1.points_per_wavelength / s2.points_per_wavelength - 2.0).abs() < 1e-12);
        assert!(s1.h_max >= s1.h_avg);
    }

    #[test]
    fn subdivision_doubles_ppw() {
        let a = icosphere(2, 1.0).unwrap().stats(std::f64::consts::PI);
        let b = icosphere(3, 1.0).unwrap().stats(std::f64::consts::PI);
        let ratio = b.points_per_wavelength / a.points_per_wavelength;
        assert!((ratio - 2.0).abs() < 0.1, "ppw ratio {ratio}");
    }

    #[test]
    fn open_mesh_rejected() {
        // single triangle is not closed
        let v = vec![
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
        ];
        assert!(matches!(TriangleMesh::new(v, vec![[0, 1, 2]]), Err(Error::Topology(_))));
    }

    #[test]
    fn inconsistent_orientation_rejected() {
        // tetrahedron with one face flipped
        let v = vec![
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(0.0, 0.0, 1.0),
        ];
        let t = vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 2, 3]]; // last should be [0,3,2]
        assert!(TriangleMesh::new(v, t).is_err());
    }

    #[test]
    fn off_round_trip() {
        let m = icosphere(1, 2.0).unwrap();
        let dir = std::env::temp_dir().join("osrc_efie_mesh_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ico1.off");
        write_off(&m, &path).unwrap();
        let back = read_off(&path).unwrap();
        assert_eq!(back.triangle_count(), m.triangle_count());
        assert!((back.total_area() - m.total_area()).abs() < 1e-12);
    }

    #[test]
    fn msh_reader_triangles_only() {
        let dir = std::env::temp_dir().join("osrc_efie_mesh_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("tet.msh");
        // tetrahedron with an extra point element that must be skipped
        let msh = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n$EndNodes\n$Elements\n5\n1 15 2 0 1 1\n2 2 2 0 1 1 3 2\n3 2 2 0 1 1 2 4\n4 2 2 0 1 2 3 4\n5 2 2 0 1 1 4 3\n$EndElements\n";
        std::fs::write(&path, msh).unwrap();
        let m = read_msh(&path).unwrap();
        assert_eq!(m.triangle_count(), 4);
        assert_eq!(m.vertex_count(), 4);
    }
}
