/// Iterates every tuple in `[0, base)^len` in lexicographic order, first
/// position most significant.
#[derive(Clone, Debug)]
pub struct Odometer {
    base: usize,
    current: Option<Vec<usize>>,
}

impl Odometer {
    pub fn new(len: usize, base: usize) -> Self {
        let current = (base > 0).then(|| vec![0; len]);
        Odometer { base, current }
    }

    /// `base^len`, or `None` on overflow.
    pub fn count(len: usize, base: usize) -> Option<u128> {
        (base as u128).checked_pow(u32::try_from(len).ok()?)
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.base {
                self.current = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(out)
    }
}
