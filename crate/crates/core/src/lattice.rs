//! Finite honeycomb lattices for armchair ribbons with Z-kinks.
//!
//! Coordinates are in Å. The sheet is oriented with one carbon bond along
//! `+x`, so armchair ribbons run along `x` and zigzag edges run along `y`:
//!
//! ```text
//!   A sites at (3b/2 · u, h · v) with u ≡ v (mod 2), h = √3 b / 2
//!   B sites at the A position + (b, 0)
//! ```
//!
//! Unit-cell conventions used by [`GNRGeometry`]:
//!
//! * `width_n` counts dimer rows across the armchair ribbon (row pitch `h`);
//! * `dot_length_l` counts zigzag periods (`√3 b`) along the junction edge;
//! * `spacing_d` and `lead_length` count armchair periods (`3 b`) along `x`.
//!
//! A device is the union of straight strips laid along a staircase centre
//! line: lead → (junction ↑ → spacer →)* … → lead. Junctions are zigzag-edged
//! strips perpendicular to the ribbon, `JUNCTION_WIDTH_RATIO` times as wide as
//! the leads. Neighbouring strips meet on 45° miter lines and the two open
//! ends are cut along an armchair direction, so no zigzag end states appear
//! at the far ends of the leads.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const DEFAULT_BOND_LENGTH: f64 = 1.42;
pub const DEFAULT_LEAD_LENGTH: usize = 10;

/// Junction strip width as a fraction of the lead strip width.
pub const JUNCTION_WIDTH_RATIO: f64 = 0.6;

/// Clearance added to the lead strip so boundary rows are kept.
const STRIP_MARGIN: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GNRGeometry {
    pub width_n: usize,
    pub dot_length_l: usize,
    pub spacing_d: usize,
    pub n_dots: usize,
    pub lead_length: usize,
    pub bond_length: f64,
}

impl GNRGeometry {
    pub fn new(width_n: usize, dot_length_l: usize, spacing_d: usize, n_dots: usize) -> Self {
        GNRGeometry {
            width_n,
            dot_length_l,
            spacing_d,
            n_dots,
            lead_length: DEFAULT_LEAD_LENGTH,
            bond_length: DEFAULT_BOND_LENGTH,
        }
    }

    pub fn with_lead_length(mut self, lead_length: usize) -> Self {
        self.lead_length = lead_length;
        self
    }

    pub fn with_bond_length(mut self, bond_length: f64) -> Self {
        self.bond_length = bond_length;
        self
    }

    pub fn with_dots(mut self, n_dots: usize) -> Self {
        self.n_dots = n_dots;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidGeometry(msg));
        if self.width_n < 3 {
            return fail(format!("width_n = {} < 3", self.width_n));
        }
        if self.dot_length_l < 1 {
            return fail("dot_length_l must be >= 1".into());
        }
        if self.spacing_d < 1 {
            return fail("spacing_d must be >= 1".into());
        }
        if self.n_dots < 1 {
            return fail("n_dots must be >= 1".into());
        }
        if self.lead_length < 2 {
            return fail(format!("lead_length = {} < 2", self.lead_length));
        }
        if !(self.bond_length > 0.0 && self.bond_length.is_finite()) {
            return fail(format!("bond_length = {} must be > 0", self.bond_length));
        }
        Ok(())
    }

    /// Vertical distance between neighbouring dimer rows.
    pub fn row_height(&self) -> f64 {
        3f64.sqrt() / 2.0 * self.bond_length
    }

    pub fn armchair_period(&self) -> f64 {
        3.0 * self.bond_length
    }

    pub fn zigzag_period(&self) -> f64 {
        3f64.sqrt() * self.bond_length
    }

    /// Width of the lead strip mask, including the boundary clearance.
    pub fn lead_width(&self) -> f64 {
        (self.width_n as f64 - 1.0) * self.row_height() + STRIP_MARGIN
    }

    pub fn junction_width(&self) -> f64 {
        self.lead_width() * JUNCTION_WIDTH_RATIO
    }

    /// Lattice vector carrying kink `k` onto kink `k + 1`.
    pub fn kink_translation(&self) -> [f64; 2] {
        [
            self.spacing_d as f64 * self.armchair_period(),
            self.dot_length_l as f64 * self.zigzag_period(),
        ]
    }

    /// Registry offset of the infinite sheet relative to the mask.
    fn sheet_offset(&self) -> [f64; 2] {
        let h = self.row_height();
        let even = if self.width_n.is_multiple_of(2) {
            0.5
        } else {
            0.0
        };
        [0.0, h * (1.0 + even)]
    }

    /// Strips making up the device mask, in order along the centre line.
    pub fn segments(&self) -> Vec<Segment> {
        let lead = self.lead_length as f64 * self.armchair_period();
        let mut plan = vec![(SegmentKind::Lead, lead, [1.0, 0.0], self.lead_width())];
        for k in 0..self.n_dots {
            plan.push((
                SegmentKind::Junction(k),
                self.dot_length_l as f64 * self.zigzag_period(),
                [0.0, 1.0],
                self.junction_width(),
            ));
            if k + 1 == self.n_dots {
                plan.push((SegmentKind::Lead, lead, [1.0, 0.0], self.lead_width()));
            } else {
                let spacer = self.spacing_d as f64 * self.armchair_period();
                plan.push((
                    SegmentKind::Spacer(k),
                    spacer,
                    [1.0, 0.0],
                    self.lead_width(),
                ));
            }
        }
        let mut start = [0.0, 0.0];
        plan.into_iter()
            .map(|(kind, length, dir, width)| {
                let end = [start[0] + length * dir[0], start[1] + length * dir[1]];
                let seg = Segment {
                    kind,
                    start,
                    end,
                    dir,
                    width,
                };
                start = end;
                seg
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Lead,
    Junction(usize),
    Spacer(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub kind: SegmentKind,
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub dir: [f64; 2],
    pub width: f64,
}

impl Segment {
    /// Axis-aligned bounding box `[xmin, ymin], [xmax, ymax]` of the strip
    /// including its miter corners.
    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        let half = self.width / 2.0;
        let xs = [self.start[0], self.end[0]];
        let ys = [self.start[1], self.end[1]];
        let lo = [xs[0].min(xs[1]) - half, ys[0].min(ys[1]) - half];
        let hi = [xs[0].max(xs[1]) + half, ys[0].max(ys[1]) + half];
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sublattice {
    A,
    B,
}

impl Sublattice {
    pub fn label(self) -> &'static str {
        match self {
            Sublattice::A => "A",
            Sublattice::B => "B",
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Sublattice::A => 1.0,
            Sublattice::B => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    pub index: usize,
    pub position: [f64; 2],
    pub sublattice: Sublattice,
}

#[derive(Debug, Clone)]
pub struct Lattice {
    pub sites: Vec<Site>,
    /// Unordered pairs stored as `(i, j)` with `i < j`, sorted.
    pub bonds: Vec<(usize, usize)>,
    pub geometry: GNRGeometry,
    /// One sorted site list per kink.
    pub dot_masks: Vec<Vec<usize>>,
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        adjacency(self.sites.len(), &self.bonds)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(Vec::len).collect()
    }

    pub fn n_components(&self) -> usize {
        count_components(&self.adjacency())
    }

    /// Two-colouring by breadth-first search, `None` if an odd cycle exists.
    pub fn bipartite_coloring(&self) -> Option<Vec<Sublattice>> {
        let adj = self.adjacency();
        let mut color: Vec<Option<Sublattice>> = vec![None; adj.len()];
        for root in 0..adj.len() {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(Sublattice::A);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                let other = if cu == Sublattice::A {
                    Sublattice::B
                } else {
                    Sublattice::A
                };
                for &v in &adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(other);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    /// Membership flags for `mask` grown by `radius` bonds.
    pub fn grow_mask(&self, mask: &[usize], radius: usize) -> Vec<bool> {
        let adj = self.adjacency();
        let mut inside = vec![false; self.sites.len()];
        let mut frontier: Vec<usize> = mask.to_vec();
        for &i in mask {
            inside[i] = true;
        }
        for _ in 0..radius {
            let mut next = Vec::new();
            for &u in &frontier {
                for &v in &adj[u] {
                    if !inside[v] {
                        inside[v] = true;
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        inside
    }

    /// Flags for dot `k` with a halo of `radius` bonds.
    pub fn dot_region(&self, k: usize, radius: usize) -> Vec<bool> {
        self.grow_mask(&self.dot_masks[k], radius)
    }

    /// Flags for the union of all dots, each with a halo of `radius` bonds.
    pub fn all_dots_region(&self, radius: usize) -> Vec<bool> {
        let all: Vec<usize> = self.dot_masks.iter().flatten().copied().collect();
        self.grow_mask(&all, radius)
    }

    /// Plain-text serialization with fixed 9-decimal coordinates.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "sites {} bonds {}", self.sites.len(), self.bonds.len());
        for s in &self.sites {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                s.index,
                fixed9(s.position[0]),
                fixed9(s.position[1]),
                s.sublattice.label()
            );
        }
        for &(i, j) in &self.bonds {
            let _ = writeln!(out, "{i} {j}");
        }
        for (k, mask) in self.dot_masks.iter().enumerate() {
            let _ = write!(out, "dot {k}:");
            for i in mask {
                let _ = write!(out, " {i}");
            }
            out.push('\n');
        }
        out
    }
}

/// Parsed contents of the lattice text format.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeText {
    pub sites: Vec<Site>,
    pub bonds: Vec<(usize, usize)>,
    pub dot_masks: Vec<Vec<usize>>,
}

pub fn parse_lattice_text(text: &str) -> Result<LatticeText> {
    let err = |line: usize, message: &str| Error::Parse {
        line,
        message: message.to_string(),
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    if words.len() != 4 || words[0] != "sites" || words[2] != "bonds" {
        return Err(err(1, "expected `sites <count> bonds <count>`"));
    }
    let n_sites: usize = words[1].parse().map_err(|_| err(1, "bad site count"))?;
    let n_bonds: usize = words[3].parse().map_err(|_| err(1, "bad bond count"))?;

    let mut sites = Vec::with_capacity(n_sites);
    for _ in 0..n_sites {
        let (ln, line) = lines.next().ok_or_else(|| err(0, "truncated site list"))?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(err(ln + 1, "expected `id x y sublattice`"));
        }
        let index = f[0].parse().map_err(|_| err(ln + 1, "bad id"))?;
        let x = f[1].parse().map_err(|_| err(ln + 1, "bad x"))?;
        let y = f[2].parse().map_err(|_| err(ln + 1, "bad y"))?;
        let sublattice = match f[3] {
            "A" => Sublattice::A,
            "B" => Sublattice::B,
            _ => return Err(err(ln + 1, "sublattice must be A or B")),
        };
        sites.push(Site {
            index,
            position: [x, y],
            sublattice,
        });
    }
    let mut bonds = Vec::with_capacity(n_bonds);
    for _ in 0..n_bonds {
        let (ln, line) = lines.next().ok_or_else(|| err(0, "truncated bond list"))?;
        let mut f = line.split_whitespace();
        let i = f
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| err(ln + 1, "bad bond"))?;
        let j = f
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| err(ln + 1, "bad bond"))?;
        bonds.push((i, j));
    }
    let mut dot_masks = Vec::new();
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let rest = line
            .strip_prefix("dot ")
            .ok_or_else(|| err(ln + 1, "expected `dot <k>: ...`"))?;
        let (_, ids) = rest
            .split_once(':')
            .ok_or_else(|| err(ln + 1, "missing `:`"))?;
        let mask = ids
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| err(ln + 1, "bad site id")))
            .collect::<Result<Vec<usize>>>()?;
        dot_masks.push(mask);
    }
    Ok(LatticeText {
        sites,
        bonds,
        dot_masks,
    })
}

/// Fixed 9-decimal formatting with negative zero folded to zero.
pub fn fixed9(x: f64) -> String {
    let v = if x.abs() < 5e-10 { 0.0 } else { x };
    format!("{v:.9}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RibbonKind {
    Metallic,
    Semiconducting,
    EvenUnsymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RibbonClass {
    pub kind: RibbonKind,
    /// `m` with `N = 3m - 1`, present only for metallic widths.
    pub m_value: Option<usize>,
}

pub fn classify_width(n: usize) -> RibbonClass {
    if n % 3 == 2 {
        RibbonClass {
            kind: RibbonKind::Metallic,
            m_value: Some((n + 1) / 3),
        }
    } else if n.is_multiple_of(2) {
        RibbonClass {
            kind: RibbonKind::EvenUnsymmetric,
            m_value: None,
        }
    } else {
        RibbonClass {
            kind: RibbonKind::Semiconducting,
            m_value: None,
        }
    }
}

/// Candidate sites of an infinite sheet covering the given box.
pub fn honeycomb_patch(
    bond_length: f64,
    offset: [f64; 2],
    lo: [f64; 2],
    hi: [f64; 2],
) -> Vec<([f64; 2], Sublattice)> {
    let b = bond_length;
    let h = 3f64.sqrt() / 2.0 * b;
    let u_lo = ((lo[0] - offset[0] - b) / (1.5 * b)).floor() as i64 - 1;
    let u_hi = ((hi[0] - offset[0]) / (1.5 * b)).ceil() as i64 + 1;
    let v_lo = ((lo[1] - offset[1]) / h).floor() as i64 - 1;
    let v_hi = ((hi[1] - offset[1]) / h).ceil() as i64 + 1;
    let inside = |p: [f64; 2]| p[0] >= lo[0] && p[0] <= hi[0] && p[1] >= lo[1] && p[1] <= hi[1];
    let mut out = Vec::new();
    for u in u_lo..=u_hi {
        for v in v_lo..=v_hi {
            if (u - v).rem_euclid(2) != 0 {
                continue;
            }
            let a = [1.5 * b * u as f64 + offset[0], h * v as f64 + offset[1]];
            let bb = [a[0] + b, a[1]];
            if inside(a) {
                out.push((a, Sublattice::A));
            }
            if inside(bb) {
                out.push((bb, Sublattice::B));
            }
        }
    }
    out
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn unit(a: [f64; 2]) -> [f64; 2] {
    let n = a[0].hypot(a[1]);
    [a[0] / n, a[1] / n]
}

/// Index of the first segment whose strip contains `p`.
pub fn segment_of(segments: &[Segment], p: [f64; 2]) -> Option<usize> {
    let end_cut = [30f64.to_radians().cos(), 30f64.to_radians().sin()];
    let last = segments.len() - 1;
    segments.iter().enumerate().position(|(si, s)| {
        let normal = [-s.dir[1], s.dir[0]];
        let mid = [(s.start[0] + s.end[0]) / 2.0, (s.start[1] + s.end[1]) / 2.0];
        if dot(sub(p, mid), normal).abs() > s.width / 2.0 {
            return false;
        }
        let after_start = if si == 0 {
            dot(sub(p, s.start), end_cut) >= 0.0
        } else {
            let prev = segments[si - 1].dir;
            let miter = unit([prev[0] + s.dir[0], prev[1] + s.dir[1]]);
            dot(sub(p, s.start), miter) >= 0.0
        };
        let before_end = if si == last {
            dot(sub(p, s.end), end_cut) <= 0.0
        } else {
            let next = segments[si + 1].dir;
            let miter = unit([s.dir[0] + next[0], s.dir[1] + next[1]]);
            dot(sub(p, s.end), miter) < 0.0
        };
        after_start && before_end
    })
}

/// Nearest-neighbour pairs (distance below 1.01 bond lengths), `i < j`, sorted.
pub fn find_bonds(positions: &[[f64; 2]], bond_length: f64) -> Vec<(usize, usize)> {
    use std::collections::HashMap;
    let cutoff = 1.01 * bond_length;
    let cell = cutoff;
    let key = |p: [f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &p) in positions.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i);
    }
    let mut bonds = Vec::new();
    for (i, &p) in positions.iter().enumerate() {
        let (cx, cy) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(cands) = grid.get(&(cx + dx, cy + dy)) {
                    for &j in cands {
                        if j > i {
                            let d = sub(positions[j], p);
                            if d[0].hypot(d[1]) < cutoff {
                                bonds.push((i, j));
                            }
                        }
                    }
                }
            }
        }
    }
    bonds.sort_unstable();
    bonds
}

fn adjacency(n: usize, bonds: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in bonds {
        adj[i].push(j);
        adj[j].push(i);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

fn count_components(adj: &[Vec<usize>]) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut count = 0;
    for root in 0..adj.len() {
        if seen[root] {
            continue;
        }
        count += 1;
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

#[derive(Debug, Clone)]
pub struct PrunedGraph {
    pub sites: Vec<Site>,
    pub bonds: Vec<(usize, usize)>,
    /// Raw index of every surviving site, in new-index order.
    pub kept: Vec<usize>,
}

/// Removes degree-0 and degree-1 sites until none remain.
///
/// Surviving sites keep their relative order and are re-indexed from zero.
pub fn prune_dangling(sites: &[Site], bonds: &[(usize, usize)]) -> Result<PrunedGraph> {
    let n = sites.len();
    let adj = adjacency(n, bonds);
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut alive = vec![true; n];
    let mut queue: Vec<usize> = (0..n).filter(|&i| degree[i] <= 1).collect();
    while let Some(u) = queue.pop() {
        if !alive[u] {
            continue;
        }
        alive[u] = false;
        for &v in &adj[u] {
            if alive[v] {
                degree[v] -= 1;
                if degree[v] <= 1 {
                    queue.push(v);
                }
            }
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    if kept.is_empty() {
        return Err(Error::EmptyLattice);
    }
    let mut remap = vec![usize::MAX; n];
    for (new, &old) in kept.iter().enumerate() {
        remap[old] = new;
    }
    let sites = kept
        .iter()
        .enumerate()
        .map(|(new, &old)| Site {
            index: new,
            ..sites[old]
        })
        .collect();
    let mut bonds: Vec<(usize, usize)> = bonds
        .iter()
        .filter(|&&(i, j)| alive[i] && alive[j])
        .map(|&(i, j)| {
            let (a, b) = (remap[i], remap[j]);
            (a.min(b), a.max(b))
        })
        .collect();
    bonds.sort_unstable();
    Ok(PrunedGraph { sites, bonds, kept })
}

/// Sort key rounding coordinates to 1e-6 Å.
fn order_key(p: [f64; 2]) -> (i64, i64) {
    ((p[0] * 1e6).round() as i64, (p[1] * 1e6).round() as i64)
}

/// Builds the pruned lattice of a Z-kinked ribbon.
pub fn build_device(geom: &GNRGeometry) -> Result<Lattice> {
    geom.validate()?;
    let segments = geom.segments();
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for s in &segments {
        let (a, b) = s.bounds();
        for k in 0..2 {
            lo[k] = lo[k].min(a[k]);
            hi[k] = hi[k].max(b[k]);
        }
    }
    let patch = honeycomb_patch(geom.bond_length, geom.sheet_offset(), lo, hi);

    let mut raw: Vec<(Site, usize)> = patch
        .into_iter()
        .filter_map(|(p, sl)| {
            segment_of(&segments, p).map(|seg| {
                (
                    Site {
                        index: 0,
                        position: p,
                        sublattice: sl,
                    },
                    seg,
                )
            })
        })
        .collect();
    raw.sort_by_key(|(s, _)| order_key(s.position));
    for (i, (s, _)) in raw.iter_mut().enumerate() {
        s.index = i;
    }
    let sites: Vec<Site> = raw.iter().map(|(s, _)| *s).collect();
    let positions: Vec<[f64; 2]> = sites.iter().map(|s| s.position).collect();
    let bonds = find_bonds(&positions, geom.bond_length);
    let pruned = prune_dangling(&sites, &bonds)?;

    let junction_index: Vec<Option<usize>> = segments
        .iter()
        .map(|s| match s.kind {
            SegmentKind::Junction(k) => Some(k),
            _ => None,
        })
        .collect();
    let mut dot_masks = vec![Vec::new(); geom.n_dots];
    for (new, &old) in pruned.kept.iter().enumerate() {
        if let Some(k) = junction_index[raw[old].1] {
            dot_masks[k].push(new);
        }
    }
    if let Some(dot) = dot_masks.iter().position(Vec::is_empty) {
        return Err(Error::EmptyDot { dot });
    }
    let lattice = Lattice {
        sites: pruned.sites,
        bonds: pruned.bonds,
        geometry: *geom,
        dot_masks,
    };
    let components = lattice.n_components();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }
    Ok(lattice)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> (Vec<Site>, Vec<(usize, usize)>) {
        let b = 1.42;
        let sites: Vec<Site> = (0..6)
            .map(|k| {
                let ang = std::f64::consts::PI / 3.0 * k as f64;
                Site {
                    index: k,
                    position: [b * ang.cos(), b * ang.sin()],
                    sublattice: if k % 2 == 0 {
                        Sublattice::A
                    } else {
                        Sublattice::B
                    },
                }
            })
            .collect();
        let bonds = (0..6)
            .map(|k| (k.min((k + 1) % 6), k.max((k + 1) % 6)))
            .collect();
        (sites, bonds)
    }

    #[test]
    fn classify_width_rule() {
        assert_eq!(
            classify_width(5),
            RibbonClass {
                kind: RibbonKind::Metallic,
                m_value: Some(2)
            }
        );
        assert_eq!(classify_width(7).kind, RibbonKind::Semiconducting);
        assert_eq!(classify_width(6).kind, RibbonKind::EvenUnsymmetric);
        assert_eq!(classify_width(8).kind, RibbonKind::Metallic);
        assert_eq!(classify_width(8).m_value, Some(3));
        assert_eq!(classify_width(9).kind, RibbonKind::Semiconducting);
        assert_eq!(classify_width(4).kind, RibbonKind::EvenUnsymmetric);
    }

    #[test]
    fn benzene_is_unchanged_by_pruning() {
        let (sites, bonds) = hexagon();
        let pruned = prune_dangling(&sites, &bonds).unwrap();
        assert_eq!(pruned.sites.len(), 6);
        assert_eq!(pruned.bonds, {
            let mut b = bonds.clone();
            b.sort_unstable();
            b
        });
    }

    #[test]
    fn pendant_atom_is_removed() {
        let (mut sites, mut bonds) = hexagon();
        sites.push(Site {
            index: 6,
            position: [2.84, 0.0],
            sublattice: Sublattice::B,
        });
        bonds.push((0, 6));
        let pruned = prune_dangling(&sites, &bonds).unwrap();
        assert_eq!(pruned.sites.len(), 6);
        assert_eq!(pruned.kept, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn dangling_chain_is_removed_entirely() {
        let (mut sites, mut bonds) = hexagon();
        for k in 0..3 {
            sites.push(Site {
                index: 6 + k,
                position: [2.84 + 1.42 * k as f64, 0.0],
                sublattice: Sublattice::A,
            });
        }
        bonds.extend([(0, 6), (6, 7), (7, 8)]);
        let pruned = prune_dangling(&sites, &bonds).unwrap();
        assert_eq!(pruned.sites.len(), 6);
    }

    #[test]
    fn pruning_a_tree_fails() {
        let sites: Vec<Site> = (0..3)
            .map(|k| Site {
                index: k,
                position: [k as f64, 0.0],
                sublattice: Sublattice::A,
            })
            .collect();
        let err = prune_dangling(&sites, &[(0, 1), (1, 2)]).unwrap_err();
        assert!(matches!(err, Error::EmptyLattice));
    }

    #[test]
    fn invalid_geometries_are_rejected() {
        for g in [
            GNRGeometry::new(2, 6, 18, 1),
            GNRGeometry::new(7, 0, 18, 1),
            GNRGeometry::new(7, 6, 0, 1),
            GNRGeometry::new(7, 6, 18, 0),
            GNRGeometry::new(7, 6, 18, 1).with_lead_length(1),
            GNRGeometry::new(7, 6, 18, 1).with_bond_length(0.0),
        ] {
            assert!(
                matches!(build_device(&g), Err(Error::InvalidGeometry(_))),
                "{g:?}"
            );
        }
    }

    #[test]
    fn paper_device_builds() {
        let lat = build_device(&GNRGeometry::new(7, 6, 18, 1)).unwrap();
        assert_eq!(lat.dot_masks.len(), 1);
        assert!(!lat.dot_masks[0].is_empty());
        assert!(lat.degrees().iter().all(|&d| d == 2 || d == 3));
    }

    #[test]
    fn two_dots_give_two_disjoint_masks() {
        let lat = build_device(&GNRGeometry::new(7, 6, 8, 2)).unwrap();
        assert_eq!(lat.dot_masks.len(), 2);
        assert!(lat.dot_masks[0]
            .iter()
            .all(|i| !lat.dot_masks[1].contains(i)));
    }

    #[test]
    fn text_format_header_and_masks() {
        let lat = build_device(&GNRGeometry::new(7, 3, 4, 2).with_lead_length(3)).unwrap();
        let text = lat.to_text();
        let first = text.lines().next().unwrap();
        assert_eq!(
            first,
            format!("sites {} bonds {}", lat.len(), lat.bonds.len())
        );
        let parsed = parse_lattice_text(&text).unwrap();
        assert_eq!(parsed.bonds, lat.bonds);
        assert_eq!(parsed.dot_masks, lat.dot_masks);
        assert!(text.lines().any(|l| l.starts_with("dot 1:")));
    }

    #[test]
    fn fixed9_folds_negative_zero() {
        assert_eq!(fixed9(-0.0), "0.000000000");
        assert_eq!(fixed9(-1e-12), "0.000000000");
        assert_eq!(fixed9(1.5), "1.500000000");
    }
}
