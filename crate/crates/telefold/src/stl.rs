//! Binary STL output.
//!
//! Layout: 80-byte header, little-endian `u32` triangle count, then 50 bytes
//! per triangle (normal and three vertices as `f32`, a zero `u16`).

use std::io::{self, Write};

use telefold_core::solid::mesh_diagnostics;
use telefold_core::{TriMesh, Vec3};
use thiserror::Error;

/// Fixed header text; the remainder of the 80 bytes is zero.
pub const HEADER_TAG: &[u8] = b"telefold binary stl v1";

pub const HEADER_LEN: usize = 80;
pub const TRIANGLE_LEN: usize = 50;

#[derive(Debug, Error)]
pub enum StlError {
    #[error("mesh has no triangles")]
    Empty,
    #[error("mesh is not a closed manifold ({boundary} boundary, {nonmanifold} non-manifold edges)")]
    NotManifold { boundary: usize, nonmanifold: usize },
    #[error("mesh has {0} triangles, more than STL can count")]
    TooLarge(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn encoded_len(triangles: usize) -> usize {
    HEADER_LEN + 4 + TRIANGLE_LEN * triangles
}

/// Unit normal from the winding; zero for degenerate triangles.
fn facet_normal([a, b, c]: [Vec3; 3]) -> Vec3 {
    let n = (b - a).cross(c - a);
    let len = n.length();
    if len > 0.0 {
        n * (1.0 / len)
    } else {
        Vec3::new(0.0, 0.0, 0.0)
    }
}

fn check(mesh: &TriMesh) -> Result<u32, StlError> {
    if mesh.is_empty() {
        return Err(StlError::Empty);
    }
    let report = mesh_diagnostics(mesh);
    if !report.watertight {
        return Err(StlError::NotManifold { boundary: report.boundary_edges, nonmanifold: report.nonmanifold_edges });
    }
    u32::try_from(mesh.triangles.len()).map_err(|_| StlError::TooLarge(mesh.triangles.len()))
}

/// Writes `mesh` after checking that it is closed and manifold. Nothing is
/// written when the check fails.
pub fn write_stl<W: Write>(mesh: &TriMesh, mut out: W) -> Result<(), StlError> {
    out.write_all(&stl_bytes(mesh)?)?;
    Ok(())
}

pub fn stl_bytes(mesh: &TriMesh) -> Result<Vec<u8>, StlError> {
    let count = check(mesh)?;
    let mut buf = Vec::with_capacity(encoded_len(mesh.triangles.len()));
    let mut header = [0u8; HEADER_LEN];
    header[..HEADER_TAG.len()].copy_from_slice(HEADER_TAG);
    buf.extend_from_slice(&header);
    buf.extend_from_slice(&count.to_le_bytes());
    for i in 0..mesh.triangles.len() {
        let corners = mesh.corners(i);
        let n = facet_normal(corners);
        for v in std::iter::once(n).chain(corners) {
            for c in [v.x, v.y, v.z] {
                buf.extend_from_slice(&(c as f32).to_le_bytes());
            }
        }
        buf.extend_from_slice(&0u16.to_le_bytes());
    }
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> TriMesh {
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ];
        TriMesh::new(v, vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])
    }

    #[test]
    fn tetrahedron_is_284_bytes() {
        let bytes = stl_bytes(&tetrahedron()).unwrap();
        assert_eq!(bytes.len(), 284);
        assert_eq!(&bytes[..HEADER_TAG.len()], HEADER_TAG);
        assert!(bytes[HEADER_TAG.len()..HEADER_LEN].iter().all(|&b| b == 0));
        assert_eq!(u32::from_le_bytes(bytes[80..84].try_into().unwrap()), 4);
    }

    #[test]
    fn normals_follow_winding() {
        let bytes = stl_bytes(&tetrahedron()).unwrap();
        let f = |o: usize| f32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        // First facet [0, 2, 1] lies in z = 0 and faces down.
        assert_eq!((f(84), f(88), f(92)), (0.0, 0.0, -1.0));
    }

    #[test]
    fn refuses_empty_and_open_meshes() {
        assert!(matches!(stl_bytes(&TriMesh::new(vec![], vec![])), Err(StlError::Empty)));
        let mut open = tetrahedron();
        open.triangles.pop();
        assert!(matches!(stl_bytes(&open), Err(StlError::NotManifold { boundary: 3, .. })));
        let mut sink = Vec::new();
        assert!(write_stl(&open, &mut sink).is_err());
        assert!(sink.is_empty());
    }
}
