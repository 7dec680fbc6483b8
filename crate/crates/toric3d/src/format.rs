//! The `lattice3d v1` text format.
//!
//! Line-oriented, `#` starts a comment, blank lines are skipped. Records must
//! appear in order with dense ascending ids:
//!
//! ```text
//! lattice3d v1
//! vertices 8
//! edge 0 0 1        # full edge between vertices 0 and 1
//! edge 1 3          # partial edge anchored at vertex 3
//! face 0 0 1 2 3    # edge ids
//! volume 0 0 1 2    # face ids
//! periodic false    # optional, defaults to false
//! xlogical 4 5 6    # optional, paired with the zlogical at the same position
//! zlogical 7 8
//! ```
//!
//! [`load_lattice`] validates the result and refuses lattices with
//! violations; [`parse_lattice`] stops after structural assembly so callers
//! can inspect the violations themselves.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::bits::FaceSet;
use crate::lattice::{ChainComplex3, LatticeError};

const HEADER: &str = "lattice3d v1";

/// Serializes a complex in canonical record order. Logical sections are
/// emitted only for complexes carrying a supplied basis.
pub fn save_lattice<W: Write>(c: &ChainComplex3, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{HEADER}")?;
    writeln!(w, "vertices {}", c.vertex_count())?;
    for e in 0..c.edge_count() {
        let (a, b) = c.edge_endpoints(e);
        match b {
            Some(b) => writeln!(w, "edge {e} {a} {b}")?,
            None => writeln!(w, "edge {e} {a}")?,
        }
    }
    for f in 0..c.face_count() {
        write!(w, "face {f}")?;
        for &e in c.face_edges(f) {
            write!(w, " {e}")?;
        }
        writeln!(w)?;
    }
    for v in 0..c.volume_count() {
        write!(w, "volume {v}")?;
        for &f in c.volume_faces(v) {
            write!(w, " {f}")?;
        }
        writeln!(w)?;
    }
    writeln!(w, "periodic {}", c.periodic())?;
    if let Some(basis) = c.supplied_basis() {
        for (x, z) in basis.x_reps.iter().zip(&basis.z_reps) {
            write!(w, "xlogical")?;
            for f in x {
                write!(w, " {f}")?;
            }
            writeln!(w)?;
            write!(w, "zlogical")?;
            for f in z {
                write!(w, " {f}")?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Parses without validating; the complex may violate the lattice conditions.
pub fn parse_lattice<R: BufRead>(r: R) -> Result<ChainComplex3, LatticeError> {
    let mut vertices: Option<usize> = None;
    let mut edges: Vec<(usize, Option<usize>)> = Vec::new();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut volumes: Vec<Vec<usize>> = Vec::new();
    let mut periodic = false;
    let mut periodic_seen = false;
    let mut x_reps: Vec<Vec<usize>> = Vec::new();
    let mut z_reps: Vec<Vec<usize>> = Vec::new();
    let mut seen_header = false;

    // Record kinds must not interleave; track the stage reached so far.
    #[derive(PartialEq, PartialOrd)]
    enum Stage {
        Header,
        Vertices,
        Edges,
        Faces,
        Volumes,
        Tail,
    }
    let mut stage = Stage::Header;

    let err = |line: usize, msg: String| LatticeError::Parse { line, msg };

    for (idx, line) in r.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if !seen_header {
            if body != HEADER {
                return Err(err(line_no, format!("expected '{HEADER}' header, got '{body}'")));
            }
            seen_header = true;
            stage = Stage::Vertices;
            continue;
        }
        let mut parts = body.split_whitespace();
        let keyword = parts.next().unwrap();
        let rest: Vec<&str> = parts.collect();
        let ints = |rest: &[&str]| -> Result<Vec<usize>, LatticeError> {
            rest.iter()
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| err(line_no, format!("expected integer, got '{s}'")))
                })
                .collect()
        };
        match keyword {
            "vertices" => {
                if vertices.is_some() {
                    return Err(err(line_no, "duplicate 'vertices' record".into()));
                }
                let v = ints(&rest)?;
                if v.len() != 1 {
                    return Err(err(line_no, "'vertices' takes exactly one count".into()));
                }
                vertices = Some(v[0]);
                stage = Stage::Edges;
            }
            "edge" => {
                if stage > Stage::Edges || vertices.is_none() {
                    return Err(err(line_no, "'edge' records must follow 'vertices'".into()));
                }
                stage = Stage::Edges;
                let v = ints(&rest)?;
                if v.len() != 2 && v.len() != 3 {
                    return Err(err(
                        line_no,
                        "'edge' takes an id and one or two vertex ids".into(),
                    ));
                }
                if v[0] != edges.len() {
                    return Err(err(
                        line_no,
                        format!("edge id {} out of order, expected {}", v[0], edges.len()),
                    ));
                }
                edges.push((v[1], v.get(2).copied()));
            }
            "face" => {
                if stage > Stage::Faces {
                    return Err(err(line_no, "'face' records must precede volumes".into()));
                }
                stage = Stage::Faces;
                let v = ints(&rest)?;
                if v.len() < 2 {
                    return Err(err(line_no, "'face' takes an id and edge ids".into()));
                }
                if v[0] != faces.len() {
                    return Err(err(
                        line_no,
                        format!("face id {} out of order, expected {}", v[0], faces.len()),
                    ));
                }
                faces.push(v[1..].to_vec());
            }
            "volume" => {
                if stage > Stage::Volumes {
                    return Err(err(line_no, "'volume' records must precede the tail".into()));
                }
                stage = Stage::Volumes;
                let v = ints(&rest)?;
                if v.len() < 2 {
                    return Err(err(line_no, "'volume' takes an id and face ids".into()));
                }
                if v[0] != volumes.len() {
                    return Err(err(
                        line_no,
                        format!("volume id {} out of order, expected {}", v[0], volumes.len()),
                    ));
                }
                volumes.push(v[1..].to_vec());
            }
            "periodic" => {
                stage = Stage::Tail;
                if periodic_seen {
                    return Err(err(line_no, "duplicate 'periodic' record".into()));
                }
                periodic = match rest.as_slice() {
                    ["true"] => true,
                    ["false"] => false,
                    _ => return Err(err(line_no, "'periodic' takes true or false".into())),
                };
                periodic_seen = true;
            }
            "xlogical" => {
                stage = Stage::Tail;
                x_reps.push(ints(&rest)?);
            }
            "zlogical" => {
                stage = Stage::Tail;
                z_reps.push(ints(&rest)?);
            }
            other => {
                return Err(err(line_no, format!("unknown record '{other}'")));
            }
        }
    }

    if !seen_header {
        return Err(err(0, format!("missing '{HEADER}' header")));
    }
    let vertices = vertices.ok_or_else(|| err(0, "missing 'vertices' record".into()))?;

    let c = ChainComplex3::from_parts(vertices, edges, faces, volumes, periodic)?;
    if x_reps.is_empty() && z_reps.is_empty() {
        return Ok(c);
    }
    let nf = c.face_count();
    let mk = |reps: Vec<Vec<usize>>| -> Result<Vec<FaceSet>, LatticeError> {
        reps.into_iter()
            .map(|ids| {
                for &f in &ids {
                    if f >= nf {
                        return Err(LatticeError::Structure(format!(
                            "logical support references face {f} out of range {nf}"
                        )));
                    }
                }
                Ok(FaceSet::from_ids(nf, ids))
            })
            .collect()
    };
    c.with_supplied_basis(mk(x_reps)?, mk(z_reps)?)
}

/// Parses and validates; a lattice with violations is rejected with
/// [`LatticeError::Invalid`] listing the offending cells.
pub fn load_lattice<R: BufRead>(r: R) -> Result<ChainComplex3, LatticeError> {
    let c = parse_lattice(r)?;
    let report = c.validate();
    if !report.is_clean() {
        return Err(LatticeError::Invalid(report.violations));
    }
    Ok(c)
}

pub fn load_lattice_path(path: &Path) -> Result<ChainComplex3, LatticeError> {
    let file = std::fs::File::open(path)?;
    load_lattice(std::io::BufReader::new(file))
}

pub fn parse_lattice_path(path: &Path) -> Result<ChainComplex3, LatticeError> {
    let file = std::fs::File::open(path)?;
    parse_lattice(std::io::BufReader::new(file))
}

pub fn save_lattice_path(c: &ChainComplex3, path: &Path) -> Result<(), LatticeError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    save_lattice(c, &mut file)?;
    Ok(())
}
