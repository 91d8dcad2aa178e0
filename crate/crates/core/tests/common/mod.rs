use std::collections::VecDeque;

use pipetrack_core::imgproc::BinaryImage;

/// Breadth-first 8-connected labeling, labels in raster order of each
/// component's first pixel.
pub fn flood_fill_labels(img: &BinaryImage) -> (Vec<u32>, u32) {
    let (w, h) = (img.width(), img.height());
    let mut labels = vec![0u32; w * h];
    let mut next = 0;
    for start in 0..w * h {
        if labels[start] != 0 || !img.get(start / w, start % w) {
            continue;
        }
        next += 1;
        labels[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (r, c) = ((i / w) as i64, (i % w) as i64);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= h as i64 || nc >= w as i64 {
                        continue;
                    }
                    let j = nr as usize * w + nc as usize;
                    if labels[j] == 0 && img.get(nr as usize, nc as usize) {
                        labels[j] = next;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    (labels, next)
}
