//! Writers for legacy VTK, raw binary fields, CSV tables and JSON reports.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::conserved_to_primitive;
use crate::geometry::{GridVector, Variables};
use crate::grid::{ConservedField, GridSpec};

const VAR_NAMES: [&str; 4] = ["rho", "rho_u", "rho_v", "rho_e"];

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn vtk_header(w: &mut impl Write, title: &str, dims: (usize, usize), origin: (f64, f64), spacing: (f64, f64)) -> Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{}", title.replace('\n', " "))?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {} {} 1", dims.0, dims.1)?;
    writeln!(w, "ORIGIN {:e} {:e} 0", origin.0, origin.1)?;
    writeln!(w, "SPACING {:e} {:e} 1", spacing.0, spacing.1)?;
    writeln!(w, "POINT_DATA {}", dims.0 * dims.1)?;
    Ok(())
}

fn vtk_scalars<F: Fn(usize, usize) -> f64>(w: &mut impl Write, name: &str, nx: usize, ny: usize, f: F) -> Result<()> {
    writeln!(w, "SCALARS {name} double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for j in 0..ny {
        for i in 0..nx {
            writeln!(w, "{:e}", f(i, j))?;
        }
    }
    Ok(())
}

/// Conservative variables plus pressure and Mach number as point data.
pub fn write_vtk_field(path: &Path, field: &ConservedField, title: &str) -> Result<()> {
    let g = &field.grid;
    let mut w = create(path)?;
    vtk_header(&mut w, title, (g.nx, g.ny), (g.x0, g.y0), (g.hx(), g.hy()))?;
    for (c, name) in VAR_NAMES.iter().enumerate() {
        vtk_scalars(&mut w, name, g.nx, g.ny, |i, j| field.at(i, j)[c])?;
    }
    let prim = |i, j| conserved_to_primitive(field.at(i, j), field.gamma).ok();
    vtk_scalars(&mut w, "pressure", g.nx, g.ny, |i, j| prim(i, j).map_or(f64::NAN, |s| s.p))?;
    vtk_scalars(&mut w, "mach", g.nx, g.ny, |i, j| prim(i, j).map_or(f64::NAN, |s| s.mach()))?;
    w.flush()?;
    Ok(())
}

/// Masked grid vector on its interior node box.
pub fn write_vtk_grid_vector(path: &Path, v: &GridVector, title: &str) -> Result<()> {
    let mask = v
        .mask
        .ok_or_else(|| Error::GridMismatch("vector carries no grid mask".into()))?;
    let g = &mask.grid;
    let (ir, jr) = (mask.i_range(), mask.j_range());
    let (nx, ny) = (ir.len(), jr.len());
    let vars = v.variables.indices();
    let mut w = create(path)?;
    vtk_header(
        &mut w,
        title,
        (nx, ny),
        (g.x(ir.start as isize), g.y(jr.start as isize)),
        (g.hx(), g.hy()),
    )?;
    for (slot, &c) in vars.iter().enumerate() {
        vtk_scalars(&mut w, VAR_NAMES[c], nx, ny, |i, j| v.values[(i * ny + j) * vars.len() + slot])?;
    }
    w.flush()?;
    Ok(())
}

/// Header `nx, ny, 4` as little-endian `u64`, then `nx * ny * 4` little-endian
/// `f64` in node order (`i` outer, `j` inner, variable fastest).
pub fn write_raw(path: &Path, field: &ConservedField) -> Result<()> {
    let mut w = create(path)?;
    for h in [field.grid.nx as u64, field.grid.ny as u64, 4u64] {
        w.write_all(&h.to_le_bytes())?;
    }
    for q in &field.data {
        for v in q {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a raw field; `grid` supplies the extents and must match the header.
pub fn read_raw(path: &Path, grid: &GridSpec, gamma: f64) -> Result<ConservedField> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let word = |k: usize| -> Result<[u8; 8]> {
        bytes
            .get(8 * k..8 * k + 8)
            .and_then(|s| s.try_into().ok())
            .ok_or_else(|| Error::Io(format!("{} is truncated", path.display())))
    };
    let (nx, ny, nv) = (
        u64::from_le_bytes(word(0)?) as usize,
        u64::from_le_bytes(word(1)?) as usize,
        u64::from_le_bytes(word(2)?) as usize,
    );
    if nx != grid.nx || ny != grid.ny || nv != 4 {
        return Err(Error::GridMismatch(format!(
            "file holds {nx}x{ny}x{nv}, expected {}x{}x4",
            grid.nx, grid.ny
        )));
    }
    if bytes.len() != 24 + 32 * nx * ny {
        return Err(Error::Io(format!("{} has {} bytes, expected {}", path.display(), bytes.len(), 24 + 32 * nx * ny)));
    }
    let mut data = Vec::with_capacity(nx * ny);
    for n in 0..nx * ny {
        let mut q = [0.0; 4];
        for (c, v) in q.iter_mut().enumerate() {
            *v = f64::from_le_bytes(word(3 + 4 * n + c)?);
        }
        data.push(q);
    }
    Ok(ConservedField { grid: *grid, gamma, data })
}

/// Square matrix with `id` header row and column; `None` becomes an empty cell.
pub fn write_matrix_csv(path: &Path, ids: &[String], m: &[Vec<Option<f64>>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let mut header = vec!["id".to_string()];
    header.extend(ids.iter().cloned());
    w.write_record(&header)?;
    for (id, row) in ids.iter().zip(m) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(|v| v.map_or(String::new(), |x| x.to_string())));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per serialized record, header from the field names.
pub fn write_rows_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Long-format grid vector: node indices, variable name, value.
pub fn write_grid_vector_csv(path: &Path, v: &GridVector) -> Result<()> {
    let mask = v
        .mask
        .ok_or_else(|| Error::GridMismatch("vector carries no grid mask".into()))?;
    let vars = match v.variables {
        Variables::All => &VAR_NAMES[..],
        Variables::Density => &VAR_NAMES[..1],
    };
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["i", "j", "variable", "value"])?;
    let mut k = 0;
    for i in mask.i_range() {
        for j in mask.j_range() {
            for name in vars {
                w.write_record([i.to_string(), j.to_string(), name.to_string(), v.values[k].to_string()])?;
                k += 1;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
