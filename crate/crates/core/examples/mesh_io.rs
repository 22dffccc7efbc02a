//! Load a mesh, report its topology and geometry, and write it back.

use std::path::PathBuf;

use plateau_bound::mesh::io::{load_mesh, save_mesh};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/hemisphere.obj")));
    let mesh = load_mesh(&path).expect("mesh");
    let r = mesh.report();
    println!("{}: {} vertices, {} triangles, dimension {}", path.display(), mesh.vertex_count(), mesh.triangles().len(), mesh.dimension());
    println!("closed {} connected {} euler {}", r.closed, r.connected, mesh.euler_characteristic());
    for (i, l) in mesh.boundary_loops().iter().enumerate() {
        println!("boundary loop {i}: {} vertices, length {:.6}", l.vertex_indices.len(), l.length);
    }
    println!("area {:.6} extrinsic diameter {:.6}", mesh.area(), mesh.extrinsic_diameter());
    let out = std::env::temp_dir().join("roundtrip.mesh.json");
    save_mesh(&mesh, &out).expect("write");
    let back = load_mesh(&out).expect("read");
    println!("round trip through {}: {} vertices", out.display(), back.vertex_count());
}
