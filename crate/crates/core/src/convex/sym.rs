//! Symmetrisation of full tensors over product webs.
//!
//! These dense-tensor helpers are deliberately small-scale: they are the
//! audit path for the multiset-basis machinery in the `bang` module, and
//! the direct home of the symmetrise operation on explicit tensors.

use super::web::CVec;
use crate::rat::{int, zero, Rat};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Decodes a flat row-major index over `n` factors of size `base`.
pub fn decode_index(mut flat: usize, base: usize, n: usize) -> Vec<usize> {
    let mut digits = vec![0usize; n];
    for k in (0..n).rev() {
        digits[k] = flat % base;
        flat /= base;
    }
    digits
}

/// Encodes a multi-index back into flat row-major form.
pub fn encode_index(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Averages a degree-`n` tensor over all position permutations:
/// `(1/n!) * sum over permutations` of the relabelled tensor.
pub fn symmetrize_full(base: usize, n: usize, a: &CVec) -> CVec {
    assert_eq!(a.dim(), base.pow(n as u32));
    let perms = permutations(n);
    let factor = Rat::new(1.into(), crate::rat::factorial(n));
    let mut out = vec![zero(); a.dim()];
    for flat in 0..a.dim() {
        let digits = decode_index(flat, base, n);
        let mut acc = zero();
        for p in &perms {
            let permuted: Vec<usize> = p.iter().map(|&k| digits[k]).collect();
            acc += a.get(encode_index(&permuted, base)).clone();
        }
        out[flat] = acc * factor.clone();
    }
    CVec::new(out)
}

/// Pure tensor product of a list of vectors over the same base web.
pub fn pure_tensor(factors: &[&CVec]) -> CVec {
    let mut acc = CVec::new(vec![int(1)]);
    for f in factors {
        acc = acc.tensor(f);
    }
    acc
}
