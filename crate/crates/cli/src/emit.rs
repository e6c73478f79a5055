//! Output writers: CSV and binary PGM, written atomically.

use std::fs;
use std::io::Write;
use std::path::Path;

use scatter_core::realscatter::DensityGrid;

/// Writes bytes to `path` through a temporary sibling, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Density CSV: header `lambda,rho` (1-D) or `lambda1,lambda2,rho`
/// (2-D), row-major, 17 significant digits.
pub fn emit_csv(grid: &DensityGrid, path: &Path) -> Result<(), String> {
    if grid.rho_lambda.iter().any(|x| !x.is_finite()) {
        return Err("grid contains non-finite density values".into());
    }
    let mut s = String::new();
    match grid.genus {
        1 => {
            s.push_str("lambda,rho\n");
            for (l, r) in grid.lambda_axis.iter().zip(&grid.rho_lambda) {
                s.push_str(&format!("{l:.16e},{r:.16e}\n"));
            }
        }
        2 => {
            s.push_str("lambda1,lambda2,rho\n");
            let res = grid.resolution;
            for i in 0..res {
                for j in 0..res {
                    s.push_str(&format!(
                        "{:.16e},{:.16e},{:.16e}\n",
                        grid.lambda_axis[i],
                        grid.lambda_axis[j],
                        grid.rho_lambda[i * res + j]
                    ));
                }
            }
        }
        g => return Err(format!("no CSV writer for genus {g}")),
    }
    write_atomic(path, s.as_bytes()).map_err(|e| e.to_string())
}

/// Binary PGM ("P5", maxval 255) of a 2-D grid, scaled by the maximum
/// density; deterministic bytes for a fixed grid.
pub fn emit_pgm(grid: &DensityGrid, path: &Path) -> Result<(), String> {
    if grid.genus != 2 {
        return Err("PGM rendering needs a 2-D grid".into());
    }
    let max = grid.rho_u.iter().copied().fold(0.0f64, f64::max);
    if !(max > 0.0) {
        return Err("zero-mass grid cannot be rendered".into());
    }
    let res = grid.resolution;
    let mut bytes = format!("P5\n{res} {res}\n255\n").into_bytes();
    for v in &grid.rho_u {
        bytes.push((255.0 * v / max).round().clamp(0.0, 255.0) as u8);
    }
    write_atomic(path, &bytes).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_of(genus: usize, resolution: usize, rho: Vec<f64>) -> DensityGrid {
        let u_axis: Vec<f64> = (0..resolution)
            .map(|j| -1.5 + 3.0 * (j as f64 + 0.5) / resolution as f64)
            .collect();
        DensityGrid {
            genus,
            resolution,
            chart: vec![[1, 2, 3, 4]],
            lambda_axis: u_axis.iter().map(|u| u.tan()).collect(),
            u_axis,
            rho_lambda: rho.clone(),
            rho_u: rho,
            mass: 1.0,
            empty_cells: 0,
            normalization: 1.0,
        }
    }

    #[test]
    fn nan_cells_rejected_before_write() {
        let dir = tempfile::tempdir().unwrap();
        let grid = grid_of(1, 3, vec![0.1, f64::NAN, 0.2]);
        let err = emit_csv(&grid, &dir.path().join("bad.csv")).unwrap_err();
        assert!(err.contains("non-finite"));
        assert!(!dir.path().join("bad.csv").exists());
    }

    #[test]
    fn constant_grid_renders_saturated() {
        let dir = tempfile::tempdir().unwrap();
        let grid = grid_of(2, 2, vec![0.7; 4]);
        let path = dir.path().join("c.pgm");
        emit_pgm(&grid, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let header = b"P5\n2 2\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert!(bytes[header.len()..].iter().all(|&b| b == 255));
        assert_eq!(bytes.len(), header.len() + 4);
    }

    #[test]
    fn zero_mass_grid_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let grid = grid_of(2, 2, vec![0.0; 4]);
        assert!(emit_pgm(&grid, &dir.path().join("z.pgm")).is_err());
    }
}
