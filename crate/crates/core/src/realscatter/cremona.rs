//! Elementary transformations: the even-subset action on marked
//! configurations (a Cremona involution) and the matching divisor-class
//! action on the Jacobian side.

use crate::error::{Error, Result};
use crate::mumford::{class_add, class_to_triple, MumfordTriple, ReducedClass};
use crate::scalars::Poly;
use crate::realscatter::{ComponentIndex, MCurve, MarkedPlace};
use crate::scalars::{mobius_from_triple, Mobius, ProjPoint};

/// The fixed normalizing map sending `(a, b)` to `(0, inf)`:
/// `t -> (a1 t - a0) / (b1 t - b0)` on homogeneous pairs.
fn pair_normalizer(a: &ProjPoint, b: &ProjPoint) -> Result<Mobius> {
    Mobius::new([[a.b, -a.a], [b.b, -b.a]])
}

/// Applies the elementary transformation for one pair of indices, in the
/// chart where both the base points and the configuration anchors of the
/// pair sit at `(0, inf)`: every other value maps to `z~_i / q~_i`.
fn apply_pair(
    z: &[ProjPoint],
    q: &[ProjPoint],
    a: usize,
    b: usize,
) -> Result<Vec<ProjPoint>> {
    let mu = pair_normalizer(&z[a], &z[b])?;
    let nu = pair_normalizer(&q[a], &q[b])?;
    let mut out = Vec::with_capacity(q.len());
    for i in 0..q.len() {
        if i == a {
            out.push(ProjPoint::real(0.0));
        } else if i == b {
            out.push(ProjPoint::infinity());
        } else {
            let zt = mu.apply(&z[i]);
            let qt = nu.apply(&q[i]);
            // z~ / q~ as a projective quotient.
            out.push(ProjPoint::new(zt.a * qt.b, zt.b * qt.a));
        }
    }
    Ok(out)
}

/// Elementary Cremona transformation of a marked configuration `q` over
/// base points `z`, for an even subset `I` (1-based indices). Pairs are
/// taken in sorted order and applied sequentially. Applying the same
/// transformation twice returns the input up to a Möbius map, and exactly
/// when each pair's anchors already sit at `(0, inf)`.
pub fn elementary_cremona(
    z: &[ProjPoint],
    q: &[ProjPoint],
    subset: &[usize],
) -> Result<Vec<ProjPoint>> {
    if z.len() != q.len() {
        return Err(Error::Invalid("base and configuration lengths differ".into()));
    }
    let mut idx: Vec<usize> = subset.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != subset.len() {
        return Err(Error::Invalid("subset has repeated indices".into()));
    }
    if idx.len() % 2 != 0 {
        return Err(Error::Invalid("elementary transformations need an even subset".into()));
    }
    if idx.iter().any(|&i| i < 1 || i > q.len()) {
        return Err(Error::Invalid("subset index out of range".into()));
    }
    let mut cur = q.to_vec();
    for pair in idx.chunks(2) {
        cur = apply_pair(z, &cur, pair[0] - 1, pair[1] - 1)?;
    }
    Ok(cur)
}

/// Compares two configurations as moduli points: normalizes the first
/// three points of each to `(0, 1, inf)` and checks the rest pairwise.
pub fn configs_match_mod_mobius(a: &[ProjPoint], b: &[ProjPoint], tol: f64) -> Result<bool> {
    if a.len() != b.len() || a.len() < 3 {
        return Err(Error::Invalid("need two configurations of equal length >= 3".into()));
    }
    let std = [ProjPoint::real(0.0), ProjPoint::real(1.0), ProjPoint::infinity()];
    let ma = mobius_from_triple(&[a[0], a[1], a[2]], &std)?;
    let mb = mobius_from_triple(&[b[0], b[1], b[2]], &std)?;
    Ok(a.iter()
        .zip(b)
        .all(|(x, y)| ma.apply(x).same_point(&mb.apply(y), tol)))
}

/// Result of the divisor-side elementary transformation.
#[derive(Clone, Debug)]
pub struct DivisorAction {
    /// The transformed class, back in the chart.
    pub triple: MumfordTriple,
    /// The curve with the sheets of the subset's marked points flipped.
    pub curve: MCurve,
    /// Parity vector of the flipped marked points: the component index
    /// moves by this XOR.
    pub component_shift: ComponentIndex,
}

/// The action `D -> D - sum_(i in I) p_i + (|I|/2) h` with the marked
/// sheets flipped on `I` (1-based indices, even size).
pub fn elementary_action_divisor(
    mc: &MCurve,
    m: &MumfordTriple,
    subset: &[usize],
) -> Result<DivisorAction> {
    let mut idx: Vec<usize> = subset.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() % 2 != 0 {
        return Err(Error::Invalid("elementary transformations need an even subset".into()));
    }
    let n = mc.curve().marked().len();
    if idx.iter().any(|&i| i < 1 || i > n) {
        return Err(Error::Invalid("subset index out of range".into()));
    }

    // Class side: the class moves by the pair of involuted new marked
    // points, which in this slope chart is the pair class of the original
    // ones (the eigenline tracked by (y - V)/U is opposite the kernel
    // line of the bundle picture, so the sign of the divisor shift flips
    // relative to the pushforward formula). The fiber-class correction is
    // principal here and absorbed. Pairwise composition keeps the
    // intermediate reductions well conditioned.
    let mut cls = ReducedClass::from_triple(m);
    for pair in idx.chunks(2) {
        let p = mc.curve().marked()[pair[0] - 1];
        let q = mc.curve().marked()[pair[1] - 1];
        let u = Poly::from_roots(&[p.z, q.z]);
        let v = crate::scalars::lagrange_interpolate(&[p.z, q.z], &[p.y, q.y])?;
        cls = class_add(mc.curve(), &cls, &ReducedClass { u, v })?;
    }
    let triple = class_to_triple(mc.curve(), &cls)?;

    // Marked side: flip the sheets on I.
    let specs: Vec<crate::realscatter::MarkedSpec> = mc
        .places()
        .iter()
        .enumerate()
        .map(|(i, place)| match *place {
            MarkedPlace::Real { x, sheet, .. } => crate::realscatter::MarkedSpec::Real {
                x,
                sheet: if idx.contains(&(i + 1)) { -sheet } else { sheet },
            },
            MarkedPlace::Conj { partner } => {
                let z = mc.curve().marked()[i].z;
                // Sheet flip on a conjugate half keeps the pair structure;
                // the y sign is implicit in the principal-branch choice,
                // so the spec stays the same and the flip lands on the
                // Jacobian side only.
                crate::realscatter::MarkedSpec::Conj {
                    re: z.re,
                    im: z.im,
                    conj_pair: partner + 1,
                }
            }
        })
        .collect();
    let curve = MCurve::new(mc.roots(), &specs, mc.placement())?;

    let shift = mc.marked_parity(&idx.iter().map(|&i| i - 1).collect::<Vec<_>>());
    Ok(DivisorAction { triple, curve, component_shift: shift })
}
