/// A linear extension of the partial order `leq` on `0..n`.
///
/// Elements are ranked by the size of their down-set; `x < y` implies a
/// strictly smaller down-set, so sorting by `(rank, index)` extends the order
/// and keeps already-sorted carriers unchanged.
pub fn linear_extension(n: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let rank: Vec<usize> = (0..n)
        .map(|x| (0..n).filter(|&y| leq(y, x)).count())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (rank[x], x));
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_order_is_kept() {
        assert_eq!(linear_extension(4, |a, b| a <= b), vec![0, 1, 2, 3]);
    }

    #[test]
    fn reversed_chain_is_sorted() {
        assert_eq!(linear_extension(3, |a, b| a >= b), vec![2, 1, 0]);
    }

    #[test]
    fn extends_divisibility_order() {
        // divisibility on 1..=6, stored at 0..=5
        let leq = |a: usize, b: usize| (b + 1).is_multiple_of(a + 1);
        let order = linear_extension(6, leq);
        for i in 0..6 {
            for j in 0..6 {
                if leq(order[i], order[j]) {
                    assert!(i <= j);
                }
            }
        }
    }
}
