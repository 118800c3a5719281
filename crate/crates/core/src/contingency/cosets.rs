//! Literal orbit oracle for double cosets `S_α \ S_n / S_β`.

use std::collections::HashMap;

use crate::capacity::Guard;
use crate::error::{domain, Result};
use crate::partitions::OrderedPartition;

/// Adjacent transpositions `(k, k+1)` generating the Young subgroup of `alpha`.
fn young_generators(alpha: &OrderedPartition) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut start = 0;
    for &part in alpha.parts() {
        let part = part as usize;
        gens.extend(start..start + part - 1);
        start += part;
    }
    gens
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    fn go(cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v as u8);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Number of double cosets, counted as orbits of `S_α × S_β` acting on `S_n`
/// by `σ ↦ τ σ τ′⁻¹`.
pub fn double_coset_count(alpha: &OrderedPartition, beta: &OrderedPartition) -> Result<usize> {
    let n = alpha.weight();
    if n != beta.weight() {
        return domain(format!("margins {alpha} and {beta} have different weights"));
    }
    Guard::DoubleCoset.check(n)?;
    let perms = permutations(n);
    let index: HashMap<&[u8], usize> = perms.iter().enumerate().map(|(k, p)| (p.as_slice(), k)).collect();
    let mut parent: Vec<usize> = (0..perms.len()).collect();
    let left = young_generators(alpha);
    let right = young_generators(beta);
    let mut scratch = vec![0u8; n];
    for (k, sigma) in perms.iter().enumerate() {
        // left action: relabel values k, k+1
        for &g in &left {
            for (dst, &v) in scratch.iter_mut().zip(sigma) {
                *dst = match v as usize {
                    x if x == g => v + 1,
                    x if x == g + 1 => v - 1,
                    _ => v,
                };
            }
            let other = index[scratch.as_slice()];
            let (a, b) = (find(&mut parent, k), find(&mut parent, other));
            parent[a] = b;
        }
        // right action: swap positions g, g+1
        for &g in &right {
            scratch.copy_from_slice(sigma);
            scratch.swap(g, g + 1);
            let other = index[scratch.as_slice()];
            let (a, b) = (find(&mut parent, k), find(&mut parent, other));
            parent[a] = b;
        }
    }
    Ok((0..perms.len()).filter(|&k| find(&mut parent, k) == k).count())
}
