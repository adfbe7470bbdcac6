use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

/// Identifies the random numbers of one path: every path owns the ChaCha
/// stream `index` of the generator keyed by `seed`, so paths can be
/// produced in any order or in parallel with identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathStream {
    pub seed: u64,
    pub index: u64,
}

impl PathStream {
    pub fn new(seed: u64, index: u64) -> Self {
        PathStream { seed, index }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Point {
    pub t: f64,
    pub h: f64,
    pub key: u64,
}

/// A unit-rate Poisson random measure on `[0, horizon] x [0, inf)` generated
/// lazily in horizontal bands of height `height`. Band `k` is a Poisson
/// number of uniform points with its own position in the path stream, so
/// its content does not depend on how many other bands were opened.
///
/// Thinning against this measure (accept a point when its height is below
/// the intensity) gives the target law and couples models monotonically:
/// a larger intensity accepts a superset of points.
pub(crate) struct LayeredMeasure {
    stream: PathStream,
    purpose: u64,
    horizon: f64,
    height: f64,
    bands: Vec<Vec<Point>>,
}

impl LayeredMeasure {
    pub fn new(stream: PathStream, purpose: u64, horizon: f64, height: f64) -> Self {
        LayeredMeasure {
            stream,
            purpose,
            horizon,
            height,
            bands: Vec::new(),
        }
    }

    /// Number of bands needed to cover heights below `bound`.
    pub fn bands_below(&self, bound: f64) -> usize {
        if bound <= 0.0 {
            0
        } else {
            (bound / self.height).ceil() as usize
        }
    }

    pub fn band(&mut self, k: usize) -> &[Point] {
        while self.bands.len() <= k {
            let next = self.generate(self.bands.len());
            self.bands.push(next);
        }
        &self.bands[k]
    }

    fn generate(&self, k: usize) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.stream.seed);
        rng.set_stream(self.stream.index);
        rng.set_word_pos((((self.purpose as u128) << 20) + k as u128) << 32);
        let mean = self.height * self.horizon;
        let count = if mean > 0.0 {
            Poisson::new(mean).expect("positive mean").sample(&mut rng) as usize
        } else {
            0
        };
        let base = k as f64 * self.height;
        let mut pts: Vec<Point> = (0..count)
            .map(|_| Point {
                t: rng.random::<f64>() * self.horizon,
                h: base + rng.random::<f64>() * self.height,
                key: rng.next_u64(),
            })
            .collect();
        pts.sort_by(|a, b| a.t.total_cmp(&b.t));
        pts
    }

    /// Points of bands `0..n` with time in `(s, e]`, in time order.
    pub fn window(&mut self, n: usize, s: f64, e: f64, out: &mut Vec<Point>) {
        out.clear();
        for k in 0..n {
            let band = self.band(k);
            let lo = band.partition_point(|p| p.t <= s);
            let hi = band.partition_point(|p| p.t <= e);
            out.extend_from_slice(&band[lo..hi]);
        }
        out.sort_by(|a, b| a.t.total_cmp(&b.t));
    }
}

/// Generator for the marks attached to a measure point. The intensity mark
/// and the claim use different streams so changing one law leaves the other
/// draws untouched.
pub(crate) fn mark_rng(key: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(stream);
    rng
}
