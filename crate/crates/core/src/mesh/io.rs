//! Wavefront OBJ (3D) and `.mesh.json` (any dimension) readers and writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Point, SurfaceMesh};
use crate::error::{IoError, MeshError};

/// On-disk layout of `.mesh.json`; triangle indices are 0-based.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MeshDocument {
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    pub triangles: Vec<[usize; 3]>,
}

impl MeshDocument {
    pub fn from_mesh(mesh: &SurfaceMesh) -> Self {
        let d = mesh.dimension();
        Self {
            dimension: d,
            vertices: mesh
                .vertices()
                .iter()
                .map(|p| p.iter().take(d).copied().collect())
                .collect(),
            triangles: mesh.triangles().to_vec(),
        }
    }

    pub fn into_mesh(self) -> Result<SurfaceMesh, MeshError> {
        if self.dimension != 3 && self.dimension != 4 {
            return Err(MeshError::BadDimension(self.dimension));
        }
        let mut verts = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != self.dimension {
                return Err(MeshError::BadVertex {
                    vertex: i,
                    found: v.len(),
                    expected: self.dimension,
                });
            }
            let mut p = Point::zeros();
            for (k, x) in v.iter().enumerate() {
                p[k] = *x;
            }
            verts.push(p);
        }
        SurfaceMesh::new(self.dimension, verts, self.triangles)
    }
}

pub fn parse_obj(text: &str) -> Result<SurfaceMesh, IoError> {
    let mut verts = Vec::new();
    let mut tris = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut it = line.split_whitespace();
        let err = |message: String| IoError::Parse {
            line: lineno + 1,
            message,
        };
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it
                    .map(|t| t.parse::<f64>().map_err(|e| err(e.to_string())))
                    .collect::<Result<_, _>>()?;
                if c.len() < 3 {
                    return Err(err("vertex needs 3 coordinates".into()));
                }
                verts.push(super::p3(c[0], c[1], c[2]));
            }
            Some("f") => {
                let mut idx = Vec::new();
                for tok in it {
                    let first = tok.split('/').next().unwrap_or("");
                    let i: i64 = first.parse().map_err(|_| err(format!("bad index {tok}")))?;
                    let resolved = if i > 0 {
                        i as usize - 1
                    } else if i < 0 && (-i) as usize <= verts.len() {
                        verts.len() - (-i) as usize
                    } else {
                        return Err(err(format!("bad index {tok}")));
                    };
                    idx.push(resolved);
                }
                if idx.len() < 3 {
                    return Err(err("face needs at least 3 vertices".into()));
                }
                for k in 1..idx.len() - 1 {
                    tris.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    Ok(SurfaceMesh::new(3, verts, tris)?)
}

pub fn to_obj(mesh: &SurfaceMesh) -> Result<String, MeshError> {
    if mesh.dimension() != 3 {
        return Err(MeshError::InvalidArgument(
            "OBJ export supports 3D meshes only".into(),
        ));
    }
    let mut s = String::new();
    for v in mesh.vertices() {
        let _ = writeln!(s, "v {} {} {}", v[0], v[1], v[2]);
    }
    for t in mesh.triangles() {
        let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    Ok(s)
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Load `.obj` or `.mesh.json` by extension.
pub fn load_mesh(path: &Path) -> Result<SurfaceMesh, IoError> {
    let name = path.to_string_lossy();
    if name.ends_with(".obj") {
        parse_obj(&read(path)?)
    } else if name.ends_with(".json") {
        let doc: MeshDocument = serde_json::from_str(&read(path)?)?;
        Ok(doc.into_mesh()?)
    } else {
        Err(IoError::UnknownFormat(name.into_owned()))
    }
}

/// Save by extension; `.obj` requires a 3D mesh.
pub fn save_mesh(mesh: &SurfaceMesh, path: &Path) -> Result<(), IoError> {
    let name = path.to_string_lossy();
    let text = if name.ends_with(".obj") {
        to_obj(mesh)?
    } else if name.ends_with(".json") {
        serde_json::to_string(&MeshDocument::from_mesh(mesh))?
    } else {
        return Err(IoError::UnknownFormat(name.into_owned()));
    };
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}
