//! Permutations in one-line notation, 0-based: `p[i]` is the image of `i`.

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// `a ∘ b`.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn inverse(a: &[usize]) -> Perm {
    let mut r = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        r[x] = i;
    }
    r
}

pub fn is_odd(a: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] > a[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// All permutations of `n` in lexicographic order.
pub fn all(n: usize) -> Vec<Perm> {
    let mut out = vec![];
    let mut cur = identity(n);
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn transposition(n: usize, j: usize) -> Perm {
    let mut p = identity(n);
    p.swap(j, j + 1);
    p
}

/// Adjacent transpositions `a_1, a_2, ...` with σ = s_{a_m} ∘ ... ∘ s_{a_1}:
/// acting by σ means acting by `s_{a_1}` first.
pub fn adjacent_word(sigma: &[usize]) -> Vec<usize> {
    let mut p = sigma.to_vec();
    let mut word = vec![];
    let n = p.len();
    for pass in 0..n {
        let mut swapped = false;
        for j in 0..n.saturating_sub(1 + pass) {
            if p[j] > p[j + 1] {
                p.swap(j, j + 1);
                word.push(j);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    word
}

/// Operadic composite of permutations: the entry `i` (0-based value) of `a` is
/// replaced by the block `b + i`, larger values of `a` shift up by `|b| − 1`.
pub fn operadic_compose(a: &[usize], i: usize, b: &[usize]) -> Perm {
    let m = b.len();
    let mut out = Vec::with_capacity(a.len() + m - 1);
    for &x in a {
        if x == i {
            out.extend(b.iter().map(|y| y + i));
        } else if x > i {
            out.push(x + m - 1);
        } else {
            out.push(x);
        }
    }
    out
}

/// Permutation of `Σ sizes` points moving block `j` (of size `sizes[j]`) to
/// the position of block `σ(j)` in the permuted arrangement.
pub fn block_permutation(sigma: &[usize], sizes: &[usize]) -> Perm {
    let k = sigma.len();
    let inv = inverse(sigma);
    let mut new_start = vec![0; k];
    let mut acc = 0;
    for pos in 0..k {
        let src = inv[pos];
        new_start[src] = acc;
        acc += sizes[src];
    }
    let mut out = vec![];
    for j in 0..k {
        for t in 0..sizes[j] {
            out.push(new_start[j] + t);
        }
    }
    out
}

/// Koszul sign parity of moving graded items at position `i` to `sigma[i]`.
pub fn koszul_parity(sigma: &[usize], degrees: &[i64]) -> bool {
    let mut odd = false;
    for i in 0..sigma.len() {
        if degrees[i].rem_euclid(2) == 0 {
            continue;
        }
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] && degrees[j].rem_euclid(2) == 1 {
                odd = !odd;
            }
        }
    }
    odd
}

pub fn format(p: &[usize]) -> String {
    p.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join("")
}

/// Inverse of [`format`] for arities below ten.
pub fn parse(s: &str) -> Option<Perm> {
    let p: Option<Perm> = s.chars().map(|c| c.to_digit(10).map(|d| d as usize).and_then(|d| d.checked_sub(1))).collect();
    let p = p?;
    let mut seen = vec![false; p.len()];
    for &x in &p {
        if x >= p.len() || seen[x] {
            return None;
        }
        seen[x] = true;
    }
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_reconstruct() {
        for s in all(4) {
            let mut p = identity(4);
            for a in adjacent_word(&s) {
                p = compose(&transposition(4, a), &p);
            }
            assert_eq!(p, s);
        }
    }

    #[test]
    fn operadic_composition() {
        assert_eq!(operadic_compose(&[1, 0], 0, &[1, 0]), vec![2, 1, 0]);
        assert_eq!(operadic_compose(&[0, 1], 1, &[1, 0]), vec![0, 2, 1]);
    }

    #[test]
    fn blocks() {
        assert_eq!(block_permutation(&[1, 0], &[2, 1]), vec![1, 2, 0]);
        assert_eq!(all(3).len(), 6);
        assert!(koszul_parity(&[1, 0], &[1, 1]));
        assert!(!koszul_parity(&[1, 0], &[1, 2]));
    }
}
