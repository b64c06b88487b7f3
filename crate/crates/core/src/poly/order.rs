use std::cmp::Ordering;

/// Monomial orders on exponent vectors.
///
/// `Block` holds split points: variables `[0, s0)`, `[s0, s1)`, ... form
/// blocks compared lexicographically, with grevlex inside each block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    Block(Vec<usize>),
}

#[inline]
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    /// Block order eliminating the first `split` variables.
    pub fn elimination(split: usize) -> Self {
        MonomialOrder::Block(vec![split])
    }

    #[inline]
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => grevlex_cmp(a, b),
            MonomialOrder::Block(splits) => {
                let mut start = 0;
                for &end in splits.iter().chain(std::iter::once(&a.len())) {
                    let end = end.min(a.len());
                    if end > start {
                        let c = grevlex_cmp(&a[start..end], &b[start..end]);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                    start = end;
                }
                Ordering::Equal
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_agree_on_small_cases() {
        // x^2 vs x*y vs y^2 with x > y
        assert_eq!(MonomialOrder::Lex.cmp(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(MonomialOrder::Grevlex.cmp(&[1, 1], &[0, 2]), Ordering::Greater);
        assert_eq!(MonomialOrder::Grevlex.cmp(&[0, 3], &[2, 0]), Ordering::Greater);
        let block = MonomialOrder::elimination(1);
        assert_eq!(block.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
        assert_eq!(block.cmp(&[1, 2], &[1, 1]), Ordering::Greater);
        // grevlex tie-break: x*z^0*y^2 vs x^2*z  (3 vars) -- smaller last exponent wins
        assert_eq!(MonomialOrder::Grevlex.cmp(&[1, 2, 0], &[2, 0, 1]), Ordering::Greater);
    }
}
