//! Sorted-vector multisets of transition labels.

use crate::label::TransitionLabel;

/// A multiset of labels kept as a sorted vector.
pub(crate) type Multiset = Vec<TransitionLabel>;

pub(crate) fn with(ms: &Multiset, l: &TransitionLabel) -> Multiset {
    let mut out = ms.clone();
    let at = out.partition_point(|x| x < l);
    out.insert(at, l.clone());
    out
}

/// `a ⊆ b` for sorted multisets.
pub(crate) fn is_sub(a: &Multiset, b: &Multiset) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && &b[j] < x {
            j += 1;
        }
        if j == b.len() || &b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Separate counts of non-selection and selection labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Split {
    pub other: Multiset,
    pub sels: Multiset,
}

impl Split {
    pub(crate) fn push(&self, l: &TransitionLabel) -> Split {
        if l.is_selection() {
            Split {
                other: self.other.clone(),
                sels: with(&self.sels, l),
            }
        } else {
            Split {
                other: with(&self.other, l),
                sels: self.sels.clone(),
            }
        }
    }
}
