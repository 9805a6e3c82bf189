//! Grid classification, palette rendering to binary PPM, and boundary
//! masks.

use rayon::prelude::*;

use crate::classify::{Classification, Classifier, ClassifierConfig, EngineError, Verdict};
use crate::semigroup::Semigroup;
use crate::Complex;

/// Hard cap on grid cells.
pub const CELL_CAPACITY: usize = 100_000_000;

/// Rectangular window in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Option<Self> {
        if re_min < re_max && im_min < im_max {
            Some(Window {
                re_min,
                re_max,
                im_min,
                im_max,
            })
        } else {
            None
        }
    }

    /// Center of pixel `(i, j)`: column `i` from the left, row `j` from
    /// the top (row 0 sits at `im_max`).
    pub fn pixel_center(&self, i: usize, j: usize, nx: usize, ny: usize) -> Complex {
        let re = self.re_min + (i as f64 + 0.5) * (self.re_max - self.re_min) / nx as f64;
        let im = self.im_max - (j as f64 + 0.5) * (self.im_max - self.im_min) / ny as f64;
        Complex::new(re, im)
    }
}

/// Row-major lattice of classifications; cell `(i, j)` is at index
/// `j * nx + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifiedGrid {
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<Classification>,
    pub window: Window,
    pub cfg: ClassifierConfig,
}

impl ClassifiedGrid {
    pub fn cell(&self, i: usize, j: usize) -> &Classification {
        &self.cells[j * self.nx + i]
    }
}

/// Boundary of the fast-escaping estimate: a bit is set where
/// fast-escaping membership differs from at least one 4-neighbor.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryMask {
    pub nx: usize,
    pub ny: usize,
    pub bits: Vec<bool>,
}

impl BoundaryMask {
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.nx + i]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

#[derive(Debug)]
pub enum GridError {
    Capacity { cells: usize, limit: usize },
    Engine(EngineError),
}

impl std::fmt::Display for GridError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GridError::Capacity { cells, limit } => {
                write!(f, "grid of {} cells exceeds the {} cell limit", cells, limit)
            }
            GridError::Engine(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for GridError {}

impl From<EngineError> for GridError {
    fn from(e: EngineError) -> Self {
        GridError::Engine(e)
    }
}

/// Classify every pixel center of an `nx x ny` grid over `window`.
///
/// Rows are distributed across the current rayon thread pool; every cell
/// is classified independently, so the result is identical for any worker
/// count.
pub fn classify_grid(
    s: &Semigroup,
    window: Window,
    nx: usize,
    ny: usize,
    cfg: &ClassifierConfig,
) -> Result<ClassifiedGrid, GridError> {
    let classifier = Classifier::new(s.clone(), cfg.clone())?;
    classify_grid_with(&classifier, window, nx, ny)
}

/// [`classify_grid`] against a prebuilt classifier, reusing its word
/// tables.
pub fn classify_grid_with(
    classifier: &Classifier,
    window: Window,
    nx: usize,
    ny: usize,
) -> Result<ClassifiedGrid, GridError> {
    assert!(nx >= 1 && ny >= 1, "grid must have at least one cell");
    let cells_total = nx.checked_mul(ny).unwrap_or(usize::MAX);
    if cells_total > CELL_CAPACITY {
        return Err(GridError::Capacity {
            cells: cells_total,
            limit: CELL_CAPACITY,
        });
    }
    let cells: Vec<Classification> = (0..ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..nx).map(move |i| classifier.classify(window.pixel_center(i, j, nx, ny)))
        })
        .collect();
    Ok(ClassifiedGrid {
        nx,
        ny,
        cells,
        window,
        cfg: classifier.cfg().clone(),
    })
}

/// Rendering palette. Non-escaping and escaping cells get fixed colors;
/// fast-escaping cells are colored by a linear hue ramp over levels in
/// `[-level_bound, level_bound]`, from hue 240 (blue, deepest lag) to hue
/// 0 (red, level at the top of the window), at full saturation and value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PaletteSpec {
    pub non_escaping: [u8; 3],
    pub escaping: [u8; 3],
    pub hue_min_deg: f64,
    pub hue_max_deg: f64,
}

impl Default for PaletteSpec {
    fn default() -> Self {
        PaletteSpec {
            non_escaping: [0, 0, 0],
            escaping: [255, 255, 255],
            hue_min_deg: 0.0,
            hue_max_deg: 240.0,
        }
    }
}

impl PaletteSpec {
    pub fn color(&self, c: &Classification, level_bound: i64) -> [u8; 3] {
        match c.verdict {
            Verdict::NonEscaping => self.non_escaping,
            Verdict::Escaping => self.escaping,
            Verdict::FastEscaping { level } => {
                let b = level_bound.max(1) as f64;
                let t = ((level as f64 + b) / (2.0 * b)).clamp(0.0, 1.0);
                let hue = self.hue_max_deg + t * (self.hue_min_deg - self.hue_max_deg);
                hsv_to_rgb(hue, 1.0, 1.0)
            }
        }
    }
}

fn hsv_to_rgb(h_deg: f64, s: f64, v: f64) -> [u8; 3] {
    let h = h_deg.rem_euclid(360.0);
    let c = v * s;
    let x = c * (1.0 - ((h / 60.0).rem_euclid(2.0) - 1.0).abs());
    let (r1, g1, b1) = match h {
        h if h < 60.0 => (c, x, 0.0),
        h if h < 120.0 => (x, c, 0.0),
        h if h < 180.0 => (0.0, c, x),
        h if h < 240.0 => (0.0, x, c),
        h if h < 300.0 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let to_u8 = |f: f64| ((f + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    [to_u8(r1), to_u8(g1), to_u8(b1)]
}

/// Binary PPM (P6): `"P6\n<nx> <ny>\n255\n"` then RGB triples row-major
/// from the top row. Byte-identical across runs and worker counts.
pub fn render(grid: &ClassifiedGrid, palette: &PaletteSpec) -> Vec<u8> {
    let mut out = Vec::with_capacity(32 + grid.cells.len() * 3);
    out.extend_from_slice(format!("P6\n{} {}\n255\n", grid.nx, grid.ny).as_bytes());
    for cell in &grid.cells {
        out.extend_from_slice(&palette.color(cell, grid.cfg.level_bound));
    }
    out
}

/// Render a boundary mask as a black-and-white P6 image (boundary white).
pub fn render_mask(mask: &BoundaryMask) -> Vec<u8> {
    let mut out = Vec::with_capacity(32 + mask.bits.len() * 3);
    out.extend_from_slice(format!("P6\n{} {}\n255\n", mask.nx, mask.ny).as_bytes());
    for &b in &mask.bits {
        let v = if b { 255u8 } else { 0u8 };
        out.extend_from_slice(&[v, v, v]);
    }
    out
}

/// 4-neighbor membership-change mask over fast-escaping membership.
/// Border cells compare only the neighbors that exist.
pub fn extract_boundary(grid: &ClassifiedGrid) -> BoundaryMask {
    let (nx, ny) = (grid.nx, grid.ny);
    let member = |i: usize, j: usize| grid.cell(i, j).verdict.is_fast();
    let mut bits = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let m = member(i, j);
            let mut differs = false;
            if i > 0 && member(i - 1, j) != m {
                differs = true;
            }
            if !differs && i + 1 < nx && member(i + 1, j) != m {
                differs = true;
            }
            if !differs && j > 0 && member(i, j - 1) != m {
                differs = true;
            }
            if !differs && j + 1 < ny && member(i, j + 1) != m {
                differs = true;
            }
            bits[j * nx + i] = differs;
        }
    }
    BoundaryMask { nx, ny, bits }
}

/// Classification dump: one line per cell, `i<TAB>j<TAB>verdict<TAB>level
/// <TAB>margin`, rows top to bottom.
pub fn dump_grid(grid: &ClassifiedGrid) -> String {
    let mut out = String::new();
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let cell = grid.cell(i, j);
            let level = match cell.verdict.level() {
                Some(l) => l.to_string(),
                None => "-".to_owned(),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{:.6}\n",
                i,
                j,
                cell.verdict.code(),
                level,
                cell.margin_log
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::WitnessInfo;
    use crate::expr::parse_function;
    use crate::semigroup::Word;

    fn semigroup(texts: &[&str]) -> Semigroup {
        Semigroup::new(texts.iter().map(|t| parse_function(t).unwrap()).collect()).unwrap()
    }

    fn fake_cell(verdict: Verdict) -> Classification {
        Classification {
            verdict,
            margin_log: 0.0,
            witness: Some(WitnessInfo {
                word: Word::new(vec![0]),
                n_stop: 1,
            }),
            diagnostic: None,
        }
    }

    fn fake_grid(nx: usize, ny: usize, verdicts: Vec<Verdict>) -> ClassifiedGrid {
        ClassifiedGrid {
            nx,
            ny,
            cells: verdicts.into_iter().map(fake_cell).collect(),
            window: Window::new(-1.0, 1.0, -1.0, 1.0).unwrap(),
            cfg: ClassifierConfig::default(),
        }
    }

    #[test]
    fn pixel_mapping_closed_form() {
        let w = Window::new(-2.0, 2.0, -1.0, 1.0).unwrap();
        let (nx, ny) = (4, 2);
        // corner cells sit half a pixel inside the window corners
        let px = (w.re_max - w.re_min) / nx as f64;
        let py = (w.im_max - w.im_min) / ny as f64;
        let tl = w.pixel_center(0, 0, nx, ny);
        assert_eq!(tl, Complex::new(w.re_min + 0.5 * px, w.im_max - 0.5 * py));
        let br = w.pixel_center(nx - 1, ny - 1, nx, ny);
        assert_eq!(br, Complex::new(w.re_max - 0.5 * px, w.im_min + 0.5 * py));
    }

    #[test]
    fn single_cell_grid_at_origin() {
        let s = semigroup(&["0.25*exp(z)"]);
        let w = Window::new(-0.5, 0.5, -0.5, 0.5).unwrap();
        let grid = classify_grid(&s, w, 1, 1, &ClassifierConfig::default()).unwrap();
        assert_eq!(grid.cells.len(), 1);
        assert_eq!(grid.cell(0, 0).verdict, Verdict::NonEscaping);
    }

    #[test]
    fn two_cell_grid_splits_on_the_real_axis() {
        let s = semigroup(&["0.25*exp(z)"]);
        // centers at z = 0 and z = 5
        let w = Window::new(-2.5, 7.5, -2.5, 2.5).unwrap();
        let mut cfg = ClassifierConfig::default();
        cfg.r_override = Some(5.0);
        let grid = classify_grid(&s, w, 2, 1, &cfg).unwrap();
        assert_eq!(grid.cell(0, 0).verdict, Verdict::NonEscaping);
        assert_eq!(grid.cell(1, 0).verdict, Verdict::FastEscaping { level: 0 });
    }

    #[test]
    fn ppm_header_arithmetic() {
        let grid = fake_grid(1, 1, vec![Verdict::NonEscaping]);
        let bytes = render(&grid, &PaletteSpec::default());
        // "P6\n1 1\n255\n" is 11 bytes, plus one RGB triple
        assert_eq!(bytes.len(), 14);
        assert_eq!(&bytes[..11], b"P6\n1 1\n255\n");
        assert_eq!(&bytes[11..], &[0, 0, 0]);

        let grid = fake_grid(2, 2, vec![Verdict::Escaping; 4]);
        let bytes = render(&grid, &PaletteSpec::default());
        assert_eq!(&bytes[..11], b"P6\n2 2\n255\n");
        assert_eq!(&bytes[11..], &[255u8; 12]);
    }

    #[test]
    fn render_is_deterministic() {
        let s = semigroup(&["0.25*exp(z)"]);
        let w = Window::new(-2.0, 8.0, -3.0, 3.0).unwrap();
        let mut cfg = ClassifierConfig::default();
        cfg.max_word_len = 1;
        cfg.max_iter = 32;
        let g1 = classify_grid(&s, w, 16, 16, &cfg).unwrap();
        let g2 = classify_grid(&s, w, 16, 16, &cfg).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(
            render(&g1, &PaletteSpec::default()),
            render(&g2, &PaletteSpec::default())
        );
    }

    #[test]
    fn scheduling_independence() {
        let s = semigroup(&["0.25*exp(z)"]);
        let w = Window::new(-2.0, 8.0, -3.0, 3.0).unwrap();
        let mut cfg = ClassifierConfig::default();
        cfg.max_word_len = 1;
        cfg.max_iter = 32;
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| classify_grid(&s, w, 24, 16, &cfg).unwrap());
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| classify_grid(&s, w, 24, 16, &cfg).unwrap());
        assert_eq!(single, many);
    }

    #[test]
    fn uniform_grid_has_empty_boundary() {
        let grid = fake_grid(3, 3, vec![Verdict::NonEscaping; 9]);
        assert_eq!(extract_boundary(&grid).count(), 0);
    }

    #[test]
    fn half_plane_split_marks_two_columns() {
        // left column fast, right column non-escaping in a 4x2 grid
        let mut verdicts = Vec::new();
        for _ in 0..2 {
            verdicts.extend([
                Verdict::FastEscaping { level: 0 },
                Verdict::FastEscaping { level: 0 },
                Verdict::NonEscaping,
                Verdict::NonEscaping,
            ]);
        }
        let grid = fake_grid(4, 2, verdicts);
        let mask = extract_boundary(&grid);
        for j in 0..2 {
            assert!(!mask.get(0, j));
            assert!(mask.get(1, j));
            assert!(mask.get(2, j));
            assert!(!mask.get(3, j));
        }
    }

    #[test]
    fn boundary_symmetry() {
        // membership change is mutual: if a flags b then b flags a. Check
        // on a small real grid.
        let s = semigroup(&["0.25*exp(z)"]);
        let w = Window::new(-2.0, 8.0, -3.0, 3.0).unwrap();
        let mut cfg = ClassifierConfig::default();
        cfg.max_word_len = 1;
        cfg.max_iter = 32;
        let grid = classify_grid(&s, w, 16, 12, &cfg).unwrap();
        let member = |i: usize, j: usize| grid.cell(i, j).verdict.is_fast();
        let mask = extract_boundary(&grid);
        for j in 0..12 {
            for i in 0..16 {
                if i + 1 < 16 && member(i, j) != member(i + 1, j) {
                    assert!(mask.get(i, j) && mask.get(i + 1, j));
                }
                if j + 1 < 12 && member(i, j) != member(i, j + 1) {
                    assert!(mask.get(i, j) && mask.get(i, j + 1));
                }
            }
        }
    }

    #[test]
    fn capacity_guard() {
        let s = semigroup(&["exp(z)"]);
        let w = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let err = classify_grid(&s, w, 20_000, 20_000, &ClassifierConfig::default());
        assert!(matches!(err, Err(GridError::Capacity { .. })));
    }
}
