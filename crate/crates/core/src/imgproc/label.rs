use super::BinaryImage;

/// Per-pixel region labels, 0 = background, regions numbered `1..=region_count`
/// in raster order of their first pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    region_count: u32,
}

/// Summary of one labelled region. Bounding box is `(min_row, min_col, max_row, max_col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub label: u32,
    pub pixel_count: usize,
    pub bounding_box: (usize, usize, usize, usize),
}

impl LabelMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn region_count(&self) -> u32 {
        self.region_count
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    /// Regions ordered by label.
    pub fn regions(&self) -> Vec<Region> {
        let mut regions: Vec<Region> = (1..=self.region_count)
            .map(|label| Region {
                label,
                pixel_count: 0,
                bounding_box: (usize::MAX, usize::MAX, 0, 0),
            })
            .collect();
        for (idx, &l) in self.labels.iter().enumerate() {
            if l == 0 {
                continue;
            }
            let (row, col) = (idx / self.width, idx % self.width);
            let r = &mut regions[(l - 1) as usize];
            r.pixel_count += 1;
            let bb = &mut r.bounding_box;
            bb.0 = bb.0.min(row);
            bb.1 = bb.1.min(col);
            bb.2 = bb.2.max(row);
            bb.3 = bb.3.max(col);
        }
        regions
    }

    /// Binary mask of one label.
    pub fn mask(&self, label: u32) -> BinaryImage {
        BinaryImage::new(
            self.width,
            self.height,
            self.labels.iter().map(|&l| u8::from(l == label && l != 0)).collect(),
        )
        .expect("label map dimensions are valid")
    }
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn new() -> Self {
        // slot 0 is the background and never unioned
        Self { parent: vec![0] }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Labels 8-connected foreground regions with a two-pass union-find scan.
pub fn label_regions(b: &BinaryImage) -> LabelMap {
    let (width, height) = (b.width(), b.height());
    let mut provisional = vec![0u32; width * height];
    let mut sets = DisjointSet::new();

    for row in 0..height {
        for col in 0..width {
            if !b.get(row, col) {
                continue;
            }
            // previously visited neighbours: W, NW, N, NE
            let mut neighbours = [0u32; 4];
            if col > 0 {
                neighbours[0] = provisional[row * width + col - 1];
            }
            if row > 0 {
                let up = (row - 1) * width;
                if col > 0 {
                    neighbours[1] = provisional[up + col - 1];
                }
                neighbours[2] = provisional[up + col];
                if col + 1 < width {
                    neighbours[3] = provisional[up + col + 1];
                }
            }
            let mut current = 0;
            for &n in neighbours.iter().filter(|&&n| n != 0) {
                if current == 0 {
                    current = n;
                } else {
                    sets.union(current, n);
                }
            }
            if current == 0 {
                current = sets.make();
            }
            provisional[row * width + col] = current;
        }
    }

    // second pass: resolve roots and renumber in order of first appearance
    let mut final_of_root = vec![0u32; sets.parent.len()];
    let mut next = 0u32;
    for l in provisional.iter_mut() {
        if *l == 0 {
            continue;
        }
        let root = sets.find(*l) as usize;
        if final_of_root[root] == 0 {
            next += 1;
            final_of_root[root] = next;
        }
        *l = final_of_root[root];
    }

    LabelMap {
        width,
        height,
        labels: provisional,
        region_count: next,
    }
}

/// Drops regions smaller than `min_area` pixels and renumbers the survivors
/// consecutively, keeping their relative order.
pub fn remove_small_regions(lm: &LabelMap, min_area: usize) -> LabelMap {
    let regions = lm.regions();
    let mut remap = vec![0u32; regions.len() + 1];
    let mut next = 0u32;
    for r in &regions {
        if r.pixel_count >= min_area {
            next += 1;
            remap[r.label as usize] = next;
        }
    }
    LabelMap {
        width: lm.width,
        height: lm.height,
        labels: lm.labels.iter().map(|&l| remap[l as usize]).collect(),
        region_count: next,
    }
}

/// Region with the most pixels; ties go to the smaller label. `None` when the
/// map holds no regions.
pub fn largest_region(lm: &LabelMap) -> Option<Region> {
    lm.regions()
        .into_iter()
        .fold(None, |best: Option<Region>, r| match best {
            Some(b) if b.pixel_count >= r.pixel_count => Some(b),
            _ => Some(r),
        })
}
