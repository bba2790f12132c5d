//! Globally adaptive Gauss-Kronrod (10/21) quadrature with algebraic
//! endpoint-singularity removal.
//!
//! An endpoint singularity `(x - a)^e` with `e > -1` is removed by the
//! substitution `x = a + L v^k` before any subdivision happens, with `k`
//! chosen by [`stretch_power`]. The inverse-square-root modes are the case
//! `e = -1/2, k = 2`, i.e. `v = sqrt(x - a)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Declares integrable singularities at the ends of the integration interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndpointMode {
    None,
    /// `(x - a)^{-1/2}` at the left end.
    LeftSqrt,
    /// `(b - x)^{-1/2}` at the right end.
    RightSqrt,
    BothSqrt,
    /// General algebraic behaviour `(x - a)^left` and `(b - x)^right`.
    /// Nonnegative integer exponents mean no substitution.
    Power {
        left: f64,
        right: f64,
    },
}

impl EndpointMode {
    fn exponents(self) -> (f64, f64) {
        match self {
            EndpointMode::None => (0.0, 0.0),
            EndpointMode::LeftSqrt => (-0.5, 0.0),
            EndpointMode::RightSqrt => (0.0, -0.5),
            EndpointMode::BothSqrt => (-0.5, -0.5),
            EndpointMode::Power { left, right } => (left, right),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub endpoint_mode: EndpointMode,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 2000, endpoint_mode: EndpointMode::None }
    }
}

impl QuadratureConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn with_mode(mut self, mode: EndpointMode) -> Self {
        self.endpoint_mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_subdivisions < 1 {
            return Err(Error::domain(format!("invalid quadrature config {self:?}")));
        }
        let (l, r) = self.endpoint_mode.exponents();
        if !(l > -1.0) || !(r > -1.0) {
            return Err(Error::domain("endpoint exponents must exceed -1 to be integrable"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
}

/// Integer power `k` of the substitution `x - a = L v^k` used for an endpoint
/// behaving like `(x - a)^e`.
///
/// The smallest admissible `k` makes `v^{k(e+1)-1}` bounded. Among admissible
/// values up to 12 the first with `k e` integral is preferred, which turns both
/// the singular and the regular part of the integrand into polynomials in `v`.
pub fn stretch_power(exponent: f64) -> u32 {
    let k_min = if exponent < 0.0 { (1.0 / (1.0 + exponent) - 1e-9).ceil().max(1.0) as u32 } else { 1 };
    (k_min..=k_min.max(12))
        .find(|&k| {
            let ke = k as f64 * exponent;
            (ke - ke.round()).abs() < 1e-9
        })
        .unwrap_or(k_min)
}

#[derive(Debug, Clone, Copy)]
enum Segment {
    Plain { a: f64, len: f64 },
    Left { a: f64, len: f64, span: f64, k: i32 },
    Right { b: f64, len: f64, span: f64, k: i32 },
}

/// A quadrature node: the abscissa, its distances to both ends of the full
/// interval (computed without cancellation near the stretched end), and the
/// Jacobian of the substitution.
#[derive(Debug, Clone, Copy)]
struct Node {
    x: f64,
    to_left: f64,
    to_right: f64,
    jac: f64,
}

impl Segment {
    /// Maps `v` in `[0, 1]` to a node of the full interval.
    #[inline]
    fn map(self, v: f64) -> Node {
        match self {
            Segment::Plain { a, len } => Node { x: a + len * v, to_left: len * v, to_right: len * (1.0 - v), jac: len },
            Segment::Left { a, len, span, k } => {
                let vk1 = v.powi(k - 1);
                let d = len * vk1 * v;
                Node { x: a + d, to_left: d, to_right: span - d, jac: len * k as f64 * vk1 }
            }
            Segment::Right { b, len, span, k } => {
                let vk1 = v.powi(k - 1);
                let d = len * vk1 * v;
                Node { x: b - d, to_left: span - d, to_right: d, jac: len * k as f64 * vk1 }
            }
        }
    }
}

struct Piece {
    v0: f64,
    v1: f64,
    seg: usize,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_21<F>(f: &mut F, seg: Segment, v0: f64, v1: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64, f64, f64) -> Result<f64>,
{
    let half = 0.5 * (v1 - v0);
    let center = 0.5 * (v0 + v1);
    let mut eval = |v: f64| -> Result<f64> {
        let node = seg.map(v);
        if node.jac == 0.0 || !(node.to_left > 0.0) || !(node.to_right > 0.0) {
            return Ok(0.0);
        }
        let y = f(node.x, node.to_left, node.to_right)?;
        if !y.is_finite() {
            return Err(Error::NonFinite { x: node.x });
        }
        Ok(y * node.jac)
    };

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let fc = eval(center)?;
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let value = res_k * half;
    res_abs *= h;
    res_asc *= h;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((value, err))
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    integrate_with(|x| Ok(f(x)), a, b, cfg)
}

/// Integrates a fallible integrand; the first integrand error aborts the run.
///
/// Nodes that round onto an endpoint contribute zero.
pub fn integrate_with<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_offsets(|x, _, _| if x > a && x < b { f(x) } else { Ok(0.0) }, a, b, cfg)
}

/// Like [`integrate_with`], but the integrand receives `(x, x - a, b - x)`
/// with both distances accurate to working precision even where `x` itself
/// has rounded onto an endpoint. Integrands whose singular factor is a power
/// of the distance to an end should compute it from these.
pub fn integrate_offsets<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64, f64, f64) -> Result<f64>,
{
    cfg.validate()?;
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::domain(format!("integration interval [{a}, {b}] is invalid")));
    }
    if a == b {
        return Ok(QuadratureResult { value: 0.0, error_estimate: 0.0, subdivisions_used: 0 });
    }

    let (el, er) = cfg.endpoint_mode.exponents();
    let (kl, kr) = (stretch_power(el) as i32, stretch_power(er) as i32);
    let segments: Vec<Segment> = match (kl > 1, kr > 1) {
        (false, false) => vec![Segment::Plain { a, len: b - a }],
        (true, false) => vec![Segment::Left { a, len: b - a, span: b - a, k: kl }],
        (false, true) => vec![Segment::Right { b, len: b - a, span: b - a, k: kr }],
        (true, true) => {
            let half = 0.5 * (b - a);
            vec![
                Segment::Left { a, len: half, span: b - a, k: kl },
                Segment::Right { b, len: half, span: b - a, k: kr },
            ]
        }
    };

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Piece> = Vec::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for (i, &seg) in segments.iter().enumerate() {
        let (value, error) = gauss_kronrod_21(&mut f, seg, 0.0, 1.0)?;
        total += value;
        total_err += error;
        heap.push(Piece { v0: 0.0, v1: 1.0, seg: i, value, error });
    }

    let mut subdivisions = 0;
    while total_err > cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
        let Some(worst) = heap.pop() else {
            break;
        };
        if subdivisions >= cfg.max_subdivisions {
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.v0 + worst.v1);
        if mid <= worst.v0 || mid >= worst.v1 || (worst.v1 - worst.v0) < 1e-15 * worst.v1.abs().max(1e-300) {
            frozen.push(worst);
            continue;
        }
        let seg = segments[worst.seg];
        let (lv, le) = gauss_kronrod_21(&mut f, seg, worst.v0, mid)?;
        let (rv, re) = gauss_kronrod_21(&mut f, seg, mid, worst.v1)?;
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Piece { v0: worst.v0, v1: mid, seg: worst.seg, value: lv, error: le });
        heap.push(Piece { v0: mid, v1: worst.v1, seg: worst.seg, value: rv, error: re });
        subdivisions += 1;
    }

    let pieces = heap.into_vec().into_iter().chain(frozen);
    let (value, error_estimate) = pieces.fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    let result = QuadratureResult { value, error_estimate, subdivisions_used: subdivisions };
    if error_estimate > cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
        return Err(Error::NotConverged { best: result });
    }
    Ok(result)
}

/// Integrates `f` over `[a, ∞)` on geometrically growing panels
/// `[a, a+w], [a+w, a+2w], [a+2w, a+4w], ...`, stopping once two consecutive
/// panels each contribute less than `tail_rel` of the running total.
///
/// `left_exponent` declares algebraic behaviour `(x - a)^e` at `a`.
pub fn integrate_to_infinity<F>(
    mut f: F,
    a: f64,
    first_width: f64,
    left_exponent: f64,
    cfg: &QuadratureConfig,
    tail_rel: f64,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    const MAX_PANELS: usize = 80;
    if !(first_width > 0.0) {
        return Err(Error::domain("first panel width must be positive"));
    }
    let first_cfg = cfg.with_mode(EndpointMode::Power { left: left_exponent, right: 0.0 });
    let plain_cfg = cfg.with_mode(EndpointMode::None);

    let mut acc = integrate_with(&mut f, a, a + first_width, &first_cfg)?;
    let mut lo = a + first_width;
    let mut width = first_width;
    let mut quiet_panels = 0;
    for _ in 1..MAX_PANELS {
        let panel = integrate_with(&mut f, lo, lo + width, &plain_cfg)?;
        acc.value += panel.value;
        acc.error_estimate += panel.error_estimate;
        acc.subdivisions_used += panel.subdivisions_used;
        if panel.value.abs() <= tail_rel * acc.value.abs() {
            quiet_panels += 1;
            if quiet_panels >= 2 {
                return Ok(acc);
            }
        } else {
            quiet_panels = 0;
        }
        lo += width;
        width *= 2.0;
    }
    Err(Error::NotConverged { best: acc })
}
