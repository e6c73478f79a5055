//! Rejection sampling of the invariant measure and its pushforward
//! histogram, the sampling oracle for the density grids.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::realscatter::charts::{
    chart_angles, piece_frame, piece_mass, piece_triple, pieces_for_component, Piece,
};
use crate::realscatter::{ComponentIndex, MCurve};

/// A pushforward histogram over the same angle cells as the density grids.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub genus: usize,
    pub resolution: usize,
    pub counts: Vec<u64>,
    pub samples: usize,
    pub warnings: Vec<String>,
}

fn draw_theta<R: Rng>(piece: &Piece, g: usize, rng: &mut R) -> Vec<f64> {
    match piece {
        Piece::Real { .. } => (0..g).map(|_| rng.gen_range(0.0..2.0 * PI)).collect(),
        Piece::Conj { .. } => vec![
            rng.gen_range(-PI / 2.0..PI / 2.0),
            rng.gen_range(0.0..PI / 2.0),
        ],
    }
}


/// Draws `samples` classes from the component's invariant probability
/// measure by per-piece rejection sampling (uniform angle proposals with
/// an auto-tuned envelope), maps them through the chart and bins them.
/// Deterministic for a fixed seed.
pub fn montecarlo_pushforward(
    mc: &MCurve,
    component: ComponentIndex,
    resolution: usize,
    samples: usize,
    seed: u64,
) -> Result<Histogram> {
    if samples < 10_000 {
        return Err(Error::Invalid("need at least 10^4 samples".into()));
    }
    let g = mc.genus();
    let pieces = pieces_for_component(mc, component)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut warnings = Vec::new();

    // Piece masses for the piece-selection distribution, and envelope
    // constants from a coarse scan.
    let masses: Vec<f64> = pieces
        .iter()
        .map(|p| piece_mass(mc, p, 96))
        .collect::<Result<_>>()?;
    let total: f64 = masses.iter().sum();
    if total <= 0.0 {
        return Err(Error::Internal("component has zero mass".into()));
    }
    let mut envelopes: Vec<f64> = pieces
        .iter()
        .map(|p| {
            let mut m = 0.0f64;
            let scan = 33;
            let mut probe = |theta: &[f64]| {
                if let Ok(fr) = piece_frame(mc, p, theta) {
                    m = m.max(fr.det_a().abs());
                }
            };
            match (p, g) {
                (Piece::Real { .. }, 1) => {
                    for i in 0..scan {
                        probe(&[2.0 * PI * (i as f64 + 0.5) / scan as f64]);
                    }
                }
                (Piece::Real { .. }, 2) => {
                    for i in 0..scan {
                        for j in 0..scan {
                            probe(&[
                                2.0 * PI * (i as f64 + 0.5) / scan as f64,
                                2.0 * PI * (j as f64 + 0.5) / scan as f64,
                            ]);
                        }
                    }
                }
                (Piece::Conj { .. }, _) => {
                    for i in 0..scan {
                        for j in 0..scan {
                            probe(&[
                                -PI / 2.0 + PI * (i as f64 + 0.5) / scan as f64,
                                0.5 * PI * (j as f64 + 0.5) / scan as f64,
                            ]);
                        }
                    }
                }
                _ => {}
            }
            1.3 * m
        })
        .collect();

    // Acceptance mass of each piece under rejection from the uniform
    // proposal is mass/envelope/volume; select pieces proportionally to
    // (multiplicity-corrected) mass.
    let mut counts = vec![0u64; resolution.pow(g as u32)];
    let mut accepted = 0usize;
    let mut guard = 0usize;
    while accepted < samples {
        guard += 1;
        if guard > 2000 * samples {
            return Err(Error::Internal("rejection sampling stalled".into()));
        }
        // Piece choice by mass.
        let pick = rng.gen_range(0.0..total);
        let mut acc = 0.0;
        let mut pi = 0;
        for (i, m) in masses.iter().enumerate() {
            acc += m;
            if pick < acc {
                pi = i;
                break;
            }
        }
        let piece = &pieces[pi];
        let theta = draw_theta(piece, g, &mut rng);
        let det = match piece_frame(mc, piece, &theta) {
            Ok(fr) => fr.det_a().abs() / piece.symmetry(),
            Err(_) => continue,
        };
        // Envelope for det/symmetry, retuned on overflow.
        let env = (envelopes[pi] / piece.symmetry()).max(1e-300);
        if det > env {
            envelopes[pi] *= 2.0;
            warnings.push(format!(
                "envelope overflow on piece {pi}: retuned to {:.3e}",
                envelopes[pi]
            ));
            continue;
        }
        if rng.gen_range(0.0..1.0) >= det / env {
            continue;
        }
        // Accepted: push through the chart.
        let Ok(triple) = piece_triple(mc, piece, &theta) else {
            continue;
        };
        let Ok(u) = chart_angles(mc, &triple) else {
            continue;
        };
        let mut idx = 0usize;
        let mut ok = true;
        for &uu in &u {
            let frac = ((uu + PI / 2.0).rem_euclid(PI)) / PI;
            let cell = ((frac * resolution as f64) as usize).min(resolution - 1);
            idx = idx * resolution + cell;
            if !frac.is_finite() {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        counts[idx] += 1;
        accepted += 1;
    }
    Ok(Histogram { genus: g, resolution, counts, samples, warnings })
}
