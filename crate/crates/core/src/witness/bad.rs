//! How many same-odd-priority emissions a run packs between higher ones.

use std::fmt;

use crate::game::Priority;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bad {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Bad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bad::Finite(m) => write!(f, "{m}"),
            Bad::Infinite => write!(f, "inf"),
        }
    }
}

/// Greatest number of emissions of one odd priority in an infix of `seq`
/// with no higher emission.
pub fn bad_of_finite(seq: impl IntoIterator<Item = Priority>) -> usize {
    // counts[p] = emissions of p since the last emission above p.
    let mut counts: Vec<usize> = Vec::new();
    let mut best = 0;
    for p in seq {
        let p = p as usize;
        if counts.len() <= p {
            counts.resize(p + 1, 0);
        }
        counts[..p].fill(0);
        if p % 2 == 1 {
            counts[p] += 1;
            best = best.max(counts[p]);
        }
    }
    best
}

/// `bad` of the run emitting `prefix · cycle^ω`.
///
/// Infinite iff the cycle's top priority is odd. Otherwise every odd `p`
/// below the cycle's top is cut once per cycle copy, and odd priorities above
/// it occur only in the prefix, so three unrollings cover every maximal infix.
pub fn bad_of_priorities(prefix: &[Priority], cycle: &[Priority]) -> Bad {
    assert!(!cycle.is_empty(), "lasso runs have a nonempty cycle");
    let top = *cycle.iter().max().expect("nonempty");
    if top % 2 == 1 {
        return Bad::Infinite;
    }
    let unrolled = prefix
        .iter()
        .chain(cycle.iter().cycle().take(3 * cycle.len()))
        .copied();
    Bad::Finite(bad_of_finite(unrolled))
}
