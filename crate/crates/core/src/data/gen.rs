//! Synthetic scene generation: bright filled rectangles/ellipses (the
//! objects) over textured noise, plus unannotated distractor patches that
//! share the objects' low-level statistics — hollow rectangles, bars,
//! crosses, and speckle clusters. The distractors are what makes confident
//! false positives happen at desk scale, which is the fuel of the
//! hard-negative exchange.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DataError, DatasetManifest, SampleRecord, MANIFEST_FORMAT_VERSION};
use crate::eval::{size_bucket, SizeBucket};
use crate::geometry::{iou, BoxXYXY};
use crate::nn::Tensor;
use crate::rng::rng_from;

// rng stream tags
const SALT_IMAGE: u64 = 0xda7a_0001;
const SALT_BUCKETS: u64 = 0xda7a_0002;

/// Objects never start closer than this to the border.
const MARGIN: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub split: String,
    pub n: usize,
    pub image_size: usize,
    /// Proportions of small/medium/large objects; realized by exact quota,
    /// not independent sampling.
    pub size_mix: [f64; 3],
    pub objects_per_image: [usize; 2],
    pub distractors_per_image: [usize; 2],
    pub seed: u64,
    /// Image side must divide by this (the consuming network's stride).
    pub stride_divisor: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            split: "train".to_string(),
            n: 200,
            image_size: 128,
            size_mix: [0.3, 0.4, 0.3],
            objects_per_image: [1, 3],
            distractors_per_image: [10, 14],
            seed: 0,
            stride_divisor: 8,
        }
    }
}

/// Target area window sampled per bucket; kept inside the hard bucket
/// boundaries (1024 and 9216) with margin so integer rounding cannot cross
/// them.
fn bucket_area_range(bucket: SizeBucket, max_side: usize) -> (f64, f64) {
    let cap = (max_side * max_side) as f64 * 0.95;
    match bucket {
        // S floor keeps the smallest objects near anchor-coverable sizes
        SizeBucket::S => (300.0, 1000.0),
        SizeBucket::M => (1100.0, 9100.0_f64.min(cap)),
        SizeBucket::L => (9400.0, 14400.0_f64.min(cap)),
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), DataError> {
        let fail = |msg: String| Err(DataError::Validation(msg));
        if self.n == 0 {
            return fail("n must be positive".into());
        }
        if self.image_size == 0 || self.stride_divisor == 0 {
            return fail("image_size and stride_divisor must be positive".into());
        }
        if self.image_size % self.stride_divisor != 0 {
            return fail(format!(
                "image_size {} not divisible by stride {}",
                self.image_size, self.stride_divisor
            ));
        }
        if self.size_mix.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return fail("size_mix entries must be finite and non-negative".into());
        }
        if self.size_mix.iter().sum::<f64>() <= 0.0 {
            return fail("size_mix must have a positive sum".into());
        }
        if self.objects_per_image[0] > self.objects_per_image[1]
            || self.distractors_per_image[0] > self.distractors_per_image[1]
        {
            return fail("per-image count ranges must be lo <= hi".into());
        }
        let max_side = self.image_size.saturating_sub(2 * MARGIN);
        for (bucket, share) in [SizeBucket::S, SizeBucket::M, SizeBucket::L]
            .into_iter()
            .zip(self.size_mix)
        {
            if share <= 0.0 {
                continue;
            }
            let (lo, hi) = bucket_area_range(bucket, max_side);
            if hi < lo {
                return fail(format!(
                    "size_mix requests {bucket:?} objects but image_size {} cannot fit them \
                     (needs area {lo:.0}, at most {hi:.0} available)",
                    self.image_size
                ));
            }
        }
        Ok(())
    }

    pub fn manifest(&self) -> DatasetManifest {
        DatasetManifest {
            format_version: MANIFEST_FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: crate::config_hash(self),
            split: self.split.clone(),
            n: self.n,
            image_size: self.image_size,
            size_mix: self.size_mix,
            objects_per_image: self.objects_per_image,
            distractors_per_image: self.distractors_per_image,
            seed: self.seed,
            stride_divisor: self.stride_divisor,
        }
    }
}

/// Largest-remainder apportionment of `total` into the three buckets.
fn bucket_quotas(total: usize, mix: [f64; 3]) -> [usize; 3] {
    let sum: f64 = mix.iter().sum();
    let shares: Vec<f64> = mix.iter().map(|m| m / sum * total as f64).collect();
    let mut quotas = [0usize; 3];
    let mut assigned = 0;
    for (q, s) in quotas.iter_mut().zip(&shares) {
        *q = s.floor() as usize;
        assigned += *q;
    }
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| {
        let fa = shares[a] - shares[a].floor();
        let fb = shares[b] - shares[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().take(total - assigned) {
        quotas[i] += 1;
    }
    quotas
}

struct Canvas {
    size: usize,
    pixels: Vec<u8>,
}

impl Canvas {
    fn set(&mut self, x: usize, y: usize, v: u8) {
        self.pixels[y * self.size + x] = v;
    }

    fn fill_rect(&mut self, b: &PixelRect, base: u8, jitter: i32, rng: &mut ChaCha8Rng) {
        for y in b.y..b.y + b.h {
            for x in b.x..b.x + b.w {
                let v = base as i32 + rng.gen_range(-jitter..=jitter);
                self.set(x, y, v.clamp(0, 255) as u8);
            }
        }
    }

    fn fill_ellipse(&mut self, b: &PixelRect, base: u8, jitter: i32, rng: &mut ChaCha8Rng) {
        let (cx, cy) = (
            b.x as f64 + b.w as f64 / 2.0,
            b.y as f64 + b.h as f64 / 2.0,
        );
        let (rx, ry) = (b.w as f64 / 2.0, b.h as f64 / 2.0);
        for y in b.y..b.y + b.h {
            for x in b.x..b.x + b.w {
                let dx = (x as f64 + 0.5 - cx) / rx;
                let dy = (y as f64 + 0.5 - cy) / ry;
                if dx * dx + dy * dy <= 1.0 {
                    let v = base as i32 + rng.gen_range(-jitter..=jitter);
                    self.set(x, y, v.clamp(0, 255) as u8);
                }
            }
        }
    }

    fn outline_rect(&mut self, b: &PixelRect, thickness: usize, base: u8, jitter: i32, rng: &mut ChaCha8Rng) {
        for y in b.y..b.y + b.h {
            for x in b.x..b.x + b.w {
                let on_border = x < b.x + thickness
                    || x >= b.x + b.w - thickness
                    || y < b.y + thickness
                    || y >= b.y + b.h - thickness;
                if on_border {
                    let v = base as i32 + rng.gen_range(-jitter..=jitter);
                    self.set(x, y, v.clamp(0, 255) as u8);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct PixelRect {
    x: usize,
    y: usize,
    w: usize,
    h: usize,
}

impl PixelRect {
    fn bbox(&self) -> BoxXYXY {
        BoxXYXY::new(
            self.x as f64,
            self.y as f64,
            (self.x + self.w) as f64,
            (self.y + self.h) as f64,
        )
    }
}

/// Textured background: coarse value noise, bilinearly upsampled, plus
/// per-pixel jitter.
fn render_background(size: usize, rng: &mut ChaCha8Rng) -> Canvas {
    const CELL: usize = 8;
    let grid = size / CELL + 2;
    let coarse: Vec<f64> = (0..grid * grid).map(|_| rng.gen_range(35.0..85.0)).collect();
    let mut pixels = vec![0u8; size * size];
    for y in 0..size {
        let gy = y as f64 / CELL as f64;
        let y0 = gy.floor() as usize;
        let fy = gy - y0 as f64;
        for x in 0..size {
            let gx = x as f64 / CELL as f64;
            let x0 = gx.floor() as usize;
            let fx = gx - x0 as f64;
            let v00 = coarse[y0 * grid + x0];
            let v01 = coarse[y0 * grid + x0 + 1];
            let v10 = coarse[(y0 + 1) * grid + x0];
            let v11 = coarse[(y0 + 1) * grid + x0 + 1];
            let v = v00 * (1.0 - fx) * (1.0 - fy)
                + v01 * fx * (1.0 - fy)
                + v10 * (1.0 - fx) * fy
                + v11 * fx * fy;
            let jitter = rng.gen_range(-10.0..=10.0);
            pixels[y * size + x] = (v + jitter).clamp(0.0, 255.0) as u8;
        }
    }
    Canvas { size, pixels }
}

/// Samples an object's pixel rect for the given bucket: target area and
/// aspect in range, integer-rounded size re-checked against the hard bucket
/// boundaries.
fn sample_object_rect(
    bucket: SizeBucket,
    size: usize,
    rng: &mut ChaCha8Rng,
) -> PixelRect {
    let max_side = size - 2 * MARGIN;
    let (area_lo, area_hi) = bucket_area_range(bucket, max_side);
    loop {
        let area = rng.gen_range(area_lo..area_hi);
        let r_lo = (area / (max_side * max_side) as f64).max(0.5);
        let r_hi = ((max_side * max_side) as f64 / area).min(2.0);
        let ratio = if r_lo < r_hi { rng.gen_range(r_lo..r_hi) } else { 1.0 };
        let h = (area * ratio).sqrt().round().max(12.0) as usize;
        let w = (area / ratio).sqrt().round().max(12.0) as usize;
        if w > max_side || h > max_side {
            continue;
        }
        let realized = BoxXYXY::new(0.0, 0.0, w as f64, h as f64);
        if size_bucket(&realized) != bucket {
            continue;
        }
        let x = MARGIN + rng.gen_range(0..=max_side - w);
        let y = MARGIN + rng.gen_range(0..=max_side - h);
        return PixelRect { x, y, w, h };
    }
}

fn place_distractor(
    canvas: &mut Canvas,
    gts: &[BoxXYXY],
    rng: &mut ChaCha8Rng,
) {
    let size = canvas.size;
    for _attempt in 0..30 {
        let kind = rng.gen_range(0..7u32);
        let (w, h) = match kind {
            0 => {
                // hollow rectangle
                let w = rng.gen_range(14..48);
                (w, rng.gen_range(14..48))
            }
            1 => (rng.gen_range(20..70), rng.gen_range(2..5)), // horizontal bar
            2 => (rng.gen_range(2..5), rng.gen_range(20..70)), // vertical bar
            3 => {
                let s = rng.gen_range(16..40);
                (s, s) // cross
            }
            4 => {
                let s = rng.gen_range(14..26);
                (s, s) // speckle cluster
            }
            _ => {
                // dim filled shape: object-like but below object brightness
                let w = rng.gen_range(12..44);
                (w, rng.gen_range(12..44))
            }
        };
        if w + 2 > size || h + 2 > size {
            continue;
        }
        let rect = PixelRect {
            x: rng.gen_range(1..=size - 1 - w),
            y: rng.gen_range(1..=size - 1 - h),
            w,
            h,
        };
        // keep distractors clear of objects so anchors on them stay
        // negative-eligible
        if gts.iter().any(|gt| iou(&rect.bbox(), gt) >= 0.2) {
            continue;
        }
        let base: u8 = rng.gen_range(170..=240);
        match kind {
            0 => canvas.outline_rect(&rect, rng.gen_range(2..4), base, 10, rng),
            1 | 2 => canvas.fill_rect(&rect, base, 10, rng),
            3 => {
                // two crossing bars
                let t = rng.gen_range(2..5).min(rect.w).min(rect.h);
                let hbar = PixelRect {
                    x: rect.x,
                    y: rect.y + (rect.h - t) / 2,
                    w: rect.w,
                    h: t,
                };
                let vbar = PixelRect {
                    x: rect.x + (rect.w - t) / 2,
                    y: rect.y,
                    w: t,
                    h: rect.h,
                };
                canvas.fill_rect(&hbar, base, 10, rng);
                canvas.fill_rect(&vbar, base, 10, rng);
            }
            4 => {
                for _ in 0..rng.gen_range(3..7) {
                    let bw = rng.gen_range(2..6).min(rect.w);
                    let bh = rng.gen_range(2..6).min(rect.h);
                    let blob = PixelRect {
                        x: rect.x + rng.gen_range(0..=rect.w - bw),
                        y: rect.y + rng.gen_range(0..=rect.h - bh),
                        w: bw,
                        h: bh,
                    };
                    canvas.fill_rect(&blob, base, 10, rng);
                }
            }
            _ => {
                // intensity band reaching into the objects' range: these stay
                // confusable to the end and keep false positives coming
                let dim: u8 = rng.gen_range(140..=190);
                if rng.gen_bool(0.5) {
                    canvas.fill_rect(&rect, dim, 10, rng);
                } else {
                    canvas.fill_ellipse(&rect, dim, 10, rng);
                }
            }
        }
        return;
    }
}

fn render_sample(
    cfg: &GenConfig,
    image_index: usize,
    buckets: &[SizeBucket],
    rng: &mut ChaCha8Rng,
) -> SampleRecord {
    let size = cfg.image_size;
    let mut canvas = render_background(size, rng);

    let mut gts: Vec<BoxXYXY> = Vec::with_capacity(buckets.len());
    for &bucket in buckets {
        // rejection-place against existing objects; accept the last attempt
        // rather than dropping the object, so bucket quotas stay exact
        let mut rect = sample_object_rect(bucket, size, rng);
        for _ in 0..40 {
            if gts.iter().all(|g| iou(&rect.bbox(), g) <= 0.1) {
                break;
            }
            rect = sample_object_rect(bucket, size, rng);
        }
        let base: u8 = rng.gen_range(170..=240);
        if rng.gen_bool(0.5) {
            canvas.fill_rect(&rect, base, 10, rng);
        } else {
            canvas.fill_ellipse(&rect, base, 10, rng);
        }
        gts.push(rect.bbox());
    }

    let n_distract =
        rng.gen_range(cfg.distractors_per_image[0]..=cfg.distractors_per_image[1]);
    for _ in 0..n_distract {
        place_distractor(&mut canvas, &gts, rng);
    }

    let data: Vec<f64> = canvas.pixels.iter().map(|&v| v as f64 / 255.0).collect();
    SampleRecord {
        image_id: format!("{}_{:05}", cfg.split, image_index),
        image: Tensor::from_vec(&[1, size, size], data).expect("canvas size"),
        gts,
    }
}

/// Generates the dataset: per-image object counts, exact bucket quotas over
/// the whole set, then per-image rendering — all a pure function of
/// (config, seed).
pub fn generate_synthetic_dataset(
    cfg: &GenConfig,
) -> Result<(DatasetManifest, Vec<SampleRecord>), DataError> {
    cfg.validate()?;

    // per-image counts come from each image's own stream so rendering stays
    // independent of every other image
    let mut image_rngs: Vec<ChaCha8Rng> = (0..cfg.n)
        .map(|i| rng_from(cfg.seed, &[SALT_IMAGE, i as u64]))
        .collect();
    let counts: Vec<usize> = image_rngs
        .iter_mut()
        .map(|rng| rng.gen_range(cfg.objects_per_image[0]..=cfg.objects_per_image[1]))
        .collect();
    let total: usize = counts.iter().sum();

    let quotas = bucket_quotas(total, cfg.size_mix);
    let mut bucket_pool: Vec<SizeBucket> = Vec::with_capacity(total);
    for (bucket, &q) in [SizeBucket::S, SizeBucket::M, SizeBucket::L].iter().zip(&quotas) {
        bucket_pool.extend(std::iter::repeat(*bucket).take(q));
    }
    // spread buckets across images
    let mut shuffle_rng = rng_from(cfg.seed, &[SALT_BUCKETS]);
    for i in (1..bucket_pool.len()).rev() {
        let j = shuffle_rng.gen_range(0..=i);
        bucket_pool.swap(i, j);
    }

    let mut samples = Vec::with_capacity(cfg.n);
    let mut offset = 0;
    for (i, (rng, &count)) in image_rngs.iter_mut().zip(&counts).enumerate() {
        let buckets = &bucket_pool[offset..offset + count];
        offset += count;
        samples.push(render_sample(cfg, i, buckets, rng));
    }
    Ok((cfg.manifest(), samples))
}

/// Rebuilds the exact samples a manifest describes.
pub fn regenerate(manifest: &DatasetManifest) -> Result<Vec<SampleRecord>, DataError> {
    let cfg = GenConfig {
        split: manifest.split.clone(),
        n: manifest.n,
        image_size: manifest.image_size,
        size_mix: manifest.size_mix,
        objects_per_image: manifest.objects_per_image,
        distractors_per_image: manifest.distractors_per_image,
        seed: manifest.seed,
        stride_divisor: manifest.stride_divisor,
    };
    Ok(generate_synthetic_dataset(&cfg)?.1)
}
