//! Integer partitions in non-increasing order.

/// All partitions of `n` as non-increasing vectors, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    extend(n, n, &mut cur, &mut out);
    out
}

/// Partitions of `n` with at most `max_len` parts.
pub fn partitions_with_at_most(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    partitions(n).into_iter().filter(|p| p.len() <= max_len).collect()
}

fn extend(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    for part in (1..=cap.min(rest)).rev() {
        cur.push(part);
        extend(rest - part, part, cur, out);
        cur.pop();
    }
}

/// Multiplicities of equal entries in a sorted slice.
pub fn multiplicities(sorted: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (i, v) in sorted.iter().enumerate() {
        if i > 0 && sorted[i - 1] == *v {
            *out.last_mut().unwrap() += 1;
        } else {
            out.push(1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions(40).len(), 37338);
        assert_eq!(partitions(4)[0], vec![4]);
        assert_eq!(multiplicities(&[3, 3, 1, 1, 1]), vec![2, 3]);
    }
}
