//! Plain-text `v`/`f` mesh dump for inspection in external viewers.

use std::io::{self, Write};

use telefold_core::TriMesh;

/// Vertices first, then 1-based faces.
pub fn write_obj<W: Write>(mesh: &TriMesh, mut out: W) -> io::Result<()> {
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}
