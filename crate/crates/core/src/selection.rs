//! Categories shared by a selection of subsets, and every subset matching them.

use alloc::vec::Vec;

use crate::dataset::SubsetTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionResult {
    /// Selected subset ids, sorted and without repeats.
    pub selected: Vec<usize>,
    /// `(attribute, category)` for every attribute uniform across the selection.
    pub common: Vec<(usize, usize)>,
    /// Attributes on which the selection disagrees.
    pub distinct: Vec<usize>,
    /// All subsets carrying every common category, sorted.
    pub matching: Vec<usize>,
}

/// Splits the attributes into those the selection agrees on and the rest.
///
/// `attribute_order` lists attribute indices in display order (usually the
/// fracturedness ranking); schema order is used when it is `None`.
pub fn common_categories(
    subsets: &SubsetTable,
    selection: &[usize],
    attribute_order: Option<&[usize]>,
) -> Result<SelectionResult> {
    if selection.is_empty() {
        return Err(Error::EmptySelection);
    }
    if let Some(&bad) = selection.iter().find(|&&id| id >= subsets.len()) {
        return Err(Error::UnknownSubset(bad));
    }
    let attributes = subsets.schema().attribute_count();
    let order: Vec<usize> = match attribute_order {
        Some(o) => {
            let mut sorted = o.to_vec();
            sorted.sort_unstable();
            if sorted != (0..attributes).collect::<Vec<_>>() {
                return Err(Error::InvalidParameter(
                    "attribute order must list every attribute once".into(),
                ));
            }
            o.to_vec()
        }
        None => (0..attributes).collect(),
    };
    let mut selected = selection.to_vec();
    selected.sort_unstable();
    selected.dedup();

    let first = &subsets.subset(selected[0]).values;
    let (mut common, mut distinct) = (Vec::new(), Vec::new());
    for &a in &order {
        if selected.iter().all(|&id| subsets.subset(id).values[a] == first[a]) {
            common.push((a, first[a]));
        } else {
            distinct.push(a);
        }
    }
    let matching = (0..subsets.len())
        .filter(|&id| {
            let v = &subsets.subset(id).values;
            common.iter().all(|&(a, c)| v[a] == c)
        })
        .collect();
    Ok(SelectionResult {
        selected,
        common,
        distinct,
        matching,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::dataset::{deduplicate, CategoricalTable, TableOptions};

    fn fixture() -> SubsetTable {
        let rows = [
            vec!["red", "small", "x"],
            vec!["red", "large", "x"],
            vec!["blue", "large", "y"],
            vec!["red", "small", "y"],
        ];
        let records = rows.into_iter().enumerate().map(|(i, r)| (i + 2, r));
        deduplicate(&CategoricalTable::from_records(&["c", "s", "t"], records, &TableOptions::default()).unwrap())
    }

    #[test]
    fn single_subset_matches_only_itself() {
        let r = common_categories(&fixture(), &[1], None).unwrap();
        assert_eq!(r.common, [(0, 0), (1, 1), (2, 0)]);
        assert!(r.distinct.is_empty());
        assert_eq!(r.matching, [1]);
    }

    #[test]
    fn shared_categories_and_matches() {
        let r = common_categories(&fixture(), &[0, 1], Some(&[2, 1, 0])).unwrap();
        assert_eq!(r.common, [(2, 0), (0, 0)]);
        assert_eq!(r.distinct, [1]);
        assert_eq!(r.matching, [0, 1]);
    }

    #[test]
    fn completely_different_selection_matches_everything() {
        let r = common_categories(&fixture(), &[2, 0, 2], None).unwrap();
        assert_eq!(r.selected, [0, 2]);
        assert!(r.common.is_empty());
        assert_eq!(r.matching, [0, 1, 2, 3]);
    }

    #[test]
    fn invalid_selections() {
        let s = fixture();
        assert_eq!(common_categories(&s, &[], None).unwrap_err(), Error::EmptySelection);
        assert_eq!(common_categories(&s, &[9], None).unwrap_err(), Error::UnknownSubset(9));
        assert!(common_categories(&s, &[0], Some(&[0, 0, 1])).is_err());
    }
}
