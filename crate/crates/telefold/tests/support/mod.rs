#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_dir() -> PathBuf {
    manifest_dir().join("tests/golden")
}

/// True when goldens and shipped files should be rewritten instead of compared.
pub fn blessing() -> bool {
    std::env::var_os("TELEFOLD_BLESS").is_some()
}

/// Compares `actual` with a stored file. Returns the first differing offset.
pub fn compare_file(path: &Path, actual: &[u8]) -> Result<(), String> {
    if blessing() {
        std::fs::write(path, actual).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(());
    }
    let want = std::fs::read(path).map_err(|e| format!("{}: {e} (set TELEFOLD_BLESS=1 to create)", path.display()))?;
    if want == actual {
        return Ok(());
    }
    let at = want.iter().zip(actual).position(|(a, b)| a != b).unwrap_or(want.len().min(actual.len()));
    Err(format!("{} differs at byte {at} (stored {} bytes, produced {})", path.display(), want.len(), actual.len()))
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the built `telefold` binary.
pub fn telefold(args: &[&str], cwd: &Path) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_telefold")).args(args).current_dir(cwd).output().expect("binary runs");
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// One facet as read back from binary STL.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet {
    pub normal: [f32; 3],
    pub vertices: [[f32; 3]; 3],
    pub attribute: u16,
}

pub struct Stl {
    pub header: [u8; 80],
    pub facets: Vec<Facet>,
}

/// Independent little-endian STL parser.
pub fn read_stl(bytes: &[u8]) -> Result<Stl, String> {
    if bytes.len() < 84 {
        return Err(format!("{} bytes is shorter than the STL preamble", bytes.len()));
    }
    let mut header = [0u8; 80];
    header.copy_from_slice(&bytes[..80]);
    let n = u32::from_le_bytes([bytes[80], bytes[81], bytes[82], bytes[83]]) as usize;
    if bytes.len() != 84 + 50 * n {
        return Err(format!("count {n} implies {} bytes, file has {}", 84 + 50 * n, bytes.len()));
    }
    let f = |o: usize| f32::from_le_bytes([bytes[o], bytes[o + 1], bytes[o + 2], bytes[o + 3]]);
    let v3 = |o: usize| [f(o), f(o + 4), f(o + 8)];
    let facets = (0..n)
        .map(|i| {
            let o = 84 + 50 * i;
            Facet {
                normal: v3(o),
                vertices: [v3(o + 12), v3(o + 24), v3(o + 36)],
                attribute: u16::from_le_bytes([bytes[o + 48], bytes[o + 49]]),
            }
        })
        .collect();
    Ok(Stl { header, facets })
}

/// Edges shared by exactly two facets, matched on exact `f32` coordinates.
pub fn stl_is_closed(stl: &Stl) -> bool {
    use std::collections::HashMap;
    let key = |v: [f32; 3]| v.map(f32::to_bits);
    let mut edges: HashMap<([u32; 3], [u32; 3]), usize> = HashMap::new();
    for f in &stl.facets {
        for i in 0..3 {
            let (a, b) = (key(f.vertices[i]), key(f.vertices[(i + 1) % 3]));
            *edges.entry(if a < b { (a, b) } else { (b, a) }).or_default() += 1;
        }
    }
    !edges.is_empty() && edges.values().all(|&c| c == 2)
}
