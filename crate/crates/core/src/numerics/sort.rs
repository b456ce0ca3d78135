//! Decreasing rearrangements.

/// Decreasing rearrangement; equal entries keep their original order.
pub fn sort_desc(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Indices that list `v` in decreasing order (stable among ties).
pub fn argsort_desc(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[j].total_cmp(&v[i]));
    idx
}

/// Indices that list `|v|` in decreasing order (stable among ties).
pub fn argsort_abs_desc(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[j].abs().total_cmp(&v[i].abs()));
    idx
}

/// `|v|` sorted decreasingly.
pub fn abs_sort_desc(v: &[f64]) -> Vec<f64> {
    let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    sort_desc(&abs)
}
