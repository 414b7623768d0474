//! File artifacts: CSV fields, legacy-VTK structured points and profile
//! tables. Floats are written with 17 significant digits so replays are
//! bit-faithful.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use double_phase_core::nehari::FiberingSample;
use double_phase_core::solver::MountainPassGeometry;
use double_phase_core::ScalarField;

pub fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

/// Nodal field as CSV with header `x1,x2,value`, row-major node order.
pub fn write_field_csv(path: &Path, u: &ScalarField) -> io::Result<()> {
    let grid = u.grid();
    let dim = grid.dim();
    let mut out = String::new();
    for a in 0..dim {
        out.push_str(&format!("x{},", a + 1));
    }
    out.push_str("value\n");
    for (i, &v) in u.values().iter().enumerate() {
        for c in grid.node_coord(i) {
            out.push_str(&fmt_f(c));
            out.push(',');
        }
        out.push_str(&fmt_f(v));
        out.push('\n');
    }
    fs::write(path, out)
}

/// Legacy-VTK structured points export (2-D fields only); point data runs
/// x-fastest per the VTK convention.
pub fn write_field_vtk(path: &Path, u: &ScalarField, name: &str) -> io::Result<()> {
    let grid = u.grid();
    if grid.dim() != 2 {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "vtk export supports 2-d grids only",
        ));
    }
    let n1 = grid.node_counts()[0];
    let n2 = grid.node_counts()[1];
    let mut f = fs::File::create(path)?;
    writeln!(f, "# vtk DataFile Version 3.0")?;
    writeln!(f, "{name}")?;
    writeln!(f, "ASCII")?;
    writeln!(f, "DATASET STRUCTURED_POINTS")?;
    writeln!(f, "DIMENSIONS {n1} {n2} 1")?;
    writeln!(f, "ORIGIN 0 0 0")?;
    writeln!(f, "SPACING {} {} 1", fmt_f(grid.spacing()[0]), fmt_f(grid.spacing()[1]))?;
    writeln!(f, "POINT_DATA {}", n1 * n2)?;
    writeln!(f, "SCALARS {name} double 1")?;
    writeln!(f, "LOOKUP_TABLE default")?;
    // node (i1, i2) sits at flat index i1 * n2 + i2; VTK wants i1 fastest
    for i2 in 0..n2 {
        for i1 in 0..n1 {
            writeln!(f, "{}", fmt_f(u.values()[i1 * n2 + i2]))?;
        }
    }
    Ok(())
}

/// Fibering profile as `t,k,kprime`.
pub fn write_fibering_csv(path: &Path, samples: &[FiberingSample]) -> io::Result<()> {
    let mut out = String::from("t,k,kprime\n");
    for s in samples {
        out.push_str(&format!("{},{},{}\n", fmt_f(s.t), fmt_f(s.k), fmt_f(s.k_prime)));
    }
    fs::write(path, out)
}

/// Ray probe of the mountain geometry as `t,phi`.
pub fn write_ray_csv(path: &Path, geometry: &MountainPassGeometry) -> io::Result<()> {
    let mut out = String::from("t,phi\n");
    for &(t, phi) in &geometry.ray.samples {
        out.push_str(&format!("{},{}\n", fmt_f(t), fmt_f(phi)));
    }
    fs::write(path, out)
}
