//! Small combinatorial helpers shared by the enumerators.

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Advances `perm` to the next permutation in lexicographic order.
/// Returns false (leaving `perm` sorted descending) when it was the last one.
pub fn next_permutation<T: Ord>(perm: &mut [T]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let Some(i) = (0..perm.len() - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = (i + 1..perm.len())
        .rev()
        .find(|&j| perm[j] > perm[i])
        .unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// All permutations of `0..k` in lexicographic one-line order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..k).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

/// `+1` or `-1` by inversion parity.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The `r`-subsets of `items`, in combinadic (colexicographic) order.
pub fn subsets_of_size<T: Copy>(items: &[T], r: usize) -> Vec<Vec<T>> {
    let len = items.len();
    if r > len {
        return Vec::new();
    }
    if r == 0 {
        return vec![Vec::new()];
    }
    assert!(len < 64);
    let mut out = Vec::with_capacity(binomial(len as u64, r as u64) as usize);
    let limit = 1u64 << len;
    let mut mask = (1u64 << r) - 1;
    while mask < limit {
        out.push(
            (0..len)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| items[b])
                .collect(),
        );
        // Gosper's hack: next integer with the same popcount.
        let c = mask & mask.wrapping_neg();
        let rr = mask + c;
        mask = (((rr ^ mask) >> 2) / c) | rr;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(6, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(factorial(5), 120);
    }

    #[test]
    fn lexicographic_permutations() {
        let p = permutations(3);
        assert_eq!(
            p,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0]
            ]
        );
        let signs: Vec<i64> = p.iter().map(|q| permutation_sign(q)).collect();
        assert_eq!(signs, vec![1, -1, -1, 1, 1, -1]);
    }

    #[test]
    fn colex_subsets() {
        let s = subsets_of_size(&[1, 2, 3, 4], 2);
        assert_eq!(
            s,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 4],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        assert_eq!(subsets_of_size(&[7, 8], 0), vec![Vec::<i32>::new()]);
        assert!(subsets_of_size(&[7], 2).is_empty());
    }
}
