use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::DependencyKind;
use crate::trace::{AccessKind, Address, TaskInstance};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableMode {
    /// Remembers only the last access to each address.
    StrictPaper,
    /// Remembers the last writer and every reader since that write.
    #[default]
    MultiReader,
}

#[derive(Debug, Clone)]
enum Entry {
    Last(TaskInstance, AccessKind),
    Since {
        last_writer: Option<TaskInstance>,
        readers: Vec<TaskInstance>,
    },
}

/// Per-address access history used to derive dependencies.
#[derive(Debug, Clone)]
pub struct AddressTable {
    mode: TableMode,
    entries: HashMap<Address, Entry>,
}

impl AddressTable {
    pub fn new(mode: TableMode) -> Self {
        AddressTable {
            mode,
            entries: HashMap::new(),
        }
    }

    pub fn mode(&self) -> TableMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Records an access and returns the `(previous task, kind)` pairs it
    /// depends on. Self pairs (previous task == `t`) are returned as well;
    /// callers drop them.
    pub fn update(&mut self, a: Address, t: TaskInstance, rw: AccessKind) -> Vec<(TaskInstance, DependencyKind)> {
        match self.mode {
            TableMode::StrictPaper => {
                let prev = self.entries.insert(a, Entry::Last(t, rw));
                let Some(Entry::Last(prev_task, prev_rw)) = prev else {
                    return Vec::new();
                };
                let kind = match (prev_rw, rw) {
                    (AccessKind::Read, AccessKind::Write) => DependencyKind::WAR,
                    (AccessKind::Write, AccessKind::Read) => DependencyKind::RAW,
                    (AccessKind::Write, AccessKind::Write) => DependencyKind::WAW,
                    // read after read: no dependency, entry still overwritten
                    (AccessKind::Read, AccessKind::Read) => return Vec::new(),
                };
                vec![(prev_task, kind)]
            }
            TableMode::MultiReader => {
                let entry = self.entries.entry(a).or_insert(Entry::Since {
                    last_writer: None,
                    readers: Vec::new(),
                });
                let Entry::Since { last_writer, readers } = entry else {
                    unreachable!("table mode is fixed at construction")
                };
                match rw {
                    AccessKind::Read => {
                        if !readers.contains(&t) {
                            readers.push(t);
                        }
                        last_writer.map(|w| vec![(w, DependencyKind::RAW)]).unwrap_or_default()
                    }
                    AccessKind::Write => {
                        let mut deps: Vec<_> = readers.drain(..).map(|r| (r, DependencyKind::WAR)).collect();
                        if let Some(w) = last_writer.replace(t) {
                            deps.push((w, DependencyKind::WAW));
                        }
                        deps
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AccessKind::{Read, Write};
    use DependencyKind::*;

    const A: Address = Address::new(0, 0);

    fn t(id: u64) -> TaskInstance {
        TaskInstance::new(1, id)
    }

    fn ids(deps: Vec<(TaskInstance, DependencyKind)>) -> Vec<(u64, DependencyKind)> {
        deps.into_iter().map(|(t, k)| (t.exec_id, k)).collect()
    }

    #[test]
    fn strict_branch_table() {
        let mut at = AddressTable::new(TableMode::StrictPaper);
        assert_eq!(ids(at.update(A, t(1), Write)), vec![]);
        assert_eq!(ids(at.update(A, t(2), Read)), vec![(1, RAW)]);
        assert_eq!(ids(at.update(A, t(3), Write)), vec![(2, WAR)]);
        assert_eq!(ids(at.update(A, t(4), Write)), vec![(3, WAW)]);
    }

    #[test]
    fn strict_first_access_is_empty() {
        let mut at = AddressTable::new(TableMode::StrictPaper);
        assert!(at.update(A, t(1), Read).is_empty());
        let mut at = AddressTable::new(TableMode::StrictPaper);
        assert!(at.update(A, t(1), Write).is_empty());
    }

    #[test]
    fn strict_read_after_read_overwrites() {
        let mut at = AddressTable::new(TableMode::StrictPaper);
        at.update(A, t(1), Write);
        assert_eq!(ids(at.update(A, t(2), Read)), vec![(1, RAW)]);
        // second reader sees the first reader, not the writer
        assert!(at.update(A, t(3), Read).is_empty());
        assert_eq!(ids(at.update(A, t(4), Write)), vec![(3, WAR)]);
    }

    #[test]
    fn multi_reader_sequence() {
        let mut at = AddressTable::new(TableMode::MultiReader);
        assert!(at.update(A, t(1), Write).is_empty());
        assert_eq!(ids(at.update(A, t(2), Read)), vec![(1, RAW)]);
        assert_eq!(ids(at.update(A, t(3), Read)), vec![(1, RAW)]);
        assert_eq!(ids(at.update(A, t(4), Write)), vec![(2, WAR), (3, WAR), (1, WAW)]);
        // readers cleared by the write
        assert_eq!(ids(at.update(A, t(5), Write)), vec![(4, WAW)]);
    }

    #[test]
    fn self_pairs_are_reported() {
        let mut at = AddressTable::new(TableMode::MultiReader);
        at.update(A, t(1), Read);
        assert_eq!(ids(at.update(A, t(1), Write)), vec![(1, WAR)]);
    }

    /// Definitional oracle: for access `i`, the last write before it and the
    /// reads between that write and `i`.
    fn oracle(script: &[(u64, AccessKind)], i: usize) -> Vec<(u64, DependencyKind)> {
        let last_write = script[..i].iter().rposition(|(_, k)| *k == Write);
        let mut deps = Vec::new();
        match script[i].1 {
            Read => {
                if let Some(w) = last_write {
                    deps.push((script[w].0, RAW));
                }
            }
            Write => {
                let start = last_write.map_or(0, |w| w + 1);
                for (task, _) in &script[start..i] {
                    if !deps.contains(&(*task, WAR)) {
                        deps.push((*task, WAR));
                    }
                }
                if let Some(w) = last_write {
                    deps.push((script[w].0, WAW));
                }
            }
        }
        deps
    }

    proptest::proptest! {
        #[test]
        fn multi_reader_matches_definition(
            script in proptest::collection::vec((1u64..6, proptest::bool::ANY), 1..30)
        ) {
            let script: Vec<(u64, AccessKind)> = script
                .into_iter()
                .map(|(id, w)| (id, if w { Write } else { Read }))
                .collect();
            let mut at = AddressTable::new(TableMode::MultiReader);
            for i in 0..script.len() {
                let got = ids(at.update(A, t(script[i].0), script[i].1));
                proptest::prop_assert_eq!(got, oracle(&script, i));
            }
        }
    }
}
