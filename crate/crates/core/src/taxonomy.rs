//! The NSW taxonomy: 56 leaf types in three superclasses, plus the named
//! cross-leaf groups whose totals feed the derived features.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const STRING_LEAVES: usize = 15;
pub const NUMBER_LEAVES: usize = 21;
pub const COMBINED_LEAVES: usize = 20;
pub const LEAF_COUNT: usize = STRING_LEAVES + NUMBER_LEAVES + COMBINED_LEAVES;
pub const GROUP_COUNT: usize = 19;

/// Shipped manifest, embedded so the binary works without data files.
pub const DEFAULT_MANIFEST: &str = include_str!("../data/taxonomy.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Superclass {
    String,
    Number,
    Combined,
}

impl Superclass {
    pub const ALL: [Superclass; 3] = [Superclass::String, Superclass::Number, Superclass::Combined];

    pub fn as_str(self) -> &'static str {
        match self {
            Superclass::String => "STRING",
            Superclass::Number => "NUMBER",
            Superclass::Combined => "COMBINED",
        }
    }

    /// Slot range this superclass occupies in the leaf-count block.
    pub fn slots(self) -> std::ops::Range<usize> {
        match self {
            Superclass::String => 0..STRING_LEAVES,
            Superclass::Number => STRING_LEAVES..STRING_LEAVES + NUMBER_LEAVES,
            Superclass::Combined => STRING_LEAVES + NUMBER_LEAVES..LEAF_COUNT,
        }
    }

    fn expected_count(self) -> usize {
        self.slots().len()
    }
}

impl fmt::Display for Superclass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Superclass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "STRING" => Ok(Superclass::String),
            "NUMBER" => Ok(Superclass::Number),
            "COMBINED" => Ok(Superclass::Combined),
            other => Err(format!("unknown superclass `{other}`")),
        }
    }
}

/// Index of a leaf in the taxonomy; doubles as its feature slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NswTypeId(pub u16);

impl NswTypeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NswType {
    pub id: NswTypeId,
    pub name: String,
    pub superclass: Superclass,
    /// Indices into [`Taxonomy::groups`].
    pub groups: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Taxonomy {
    types: Vec<NswType>,
    groups: Vec<String>,
    by_name: HashMap<String, NswTypeId>,
}

impl Taxonomy {
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_MANIFEST).expect("shipped taxonomy manifest is valid")
    }

    pub fn types(&self) -> &[NswType] {
        &self.types
    }

    pub fn get(&self, id: NswTypeId) -> &NswType {
        &self.types[id.index()]
    }

    pub fn name(&self, id: NswTypeId) -> &str {
        &self.types[id.index()].name
    }

    pub fn by_name(&self, name: &str) -> Option<NswTypeId> {
        self.by_name.get(name).copied()
    }

    pub fn groups(&self) -> &[String] {
        &self.groups
    }

    /// Leaves that belong to `group`, in slot order.
    pub fn group_members(&self, group: usize) -> impl Iterator<Item = NswTypeId> + '_ {
        self.types
            .iter()
            .filter(move |t| t.groups.contains(&group))
            .map(|t| t.id)
    }

    pub fn count_by_superclass(&self, superclass: Superclass) -> usize {
        self.types.iter().filter(|t| t.superclass == superclass).count()
    }

    /// Parses and validates a manifest.
    ///
    /// The result always has exactly 56 leaves with ids `0..56`, laid out
    /// STRING, NUMBER, COMBINED in slot order, and exactly 19 groups.
    pub fn parse(source: &str) -> Result<Self> {
        let err = |line: Option<usize>, message: String| Error::Taxonomy { line, message };

        let mut groups: Vec<String> = Vec::new();
        let mut raw: Vec<(usize, u16, String, Superclass, Vec<String>)> = Vec::new();

        for (idx, line) in source.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields[0] == "@group" {
                let name = fields
                    .get(1)
                    .map(|s| s.trim())
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| err(Some(lineno), "@group needs a name".into()))?;
                if groups.iter().any(|g| g == name) {
                    return Err(err(Some(lineno), format!("duplicate group `{name}`")));
                }
                groups.push(name.to_string());
                continue;
            }
            if fields.len() < 3 || fields.len() > 4 {
                return Err(err(
                    Some(lineno),
                    format!("expected id<TAB>name<TAB>superclass[<TAB>groups], got {} fields", fields.len()),
                ));
            }
            let id: u16 = fields[0]
                .trim()
                .parse()
                .map_err(|_| err(Some(lineno), format!("invalid id `{}`", fields[0])))?;
            let name = fields[1].trim();
            if name.is_empty() {
                return Err(err(Some(lineno), "empty type name".into()));
            }
            let superclass: Superclass = fields[2]
                .trim()
                .parse()
                .map_err(|m: String| err(Some(lineno), m))?;
            let tags = fields
                .get(3)
                .map(|s| {
                    s.split(',')
                        .map(str::trim)
                        .filter(|t| !t.is_empty())
                        .map(String::from)
                        .collect()
                })
                .unwrap_or_default();
            raw.push((lineno, id, name.to_string(), superclass, tags));
        }

        if groups.len() != GROUP_COUNT {
            return Err(err(
                None,
                format!("expected {GROUP_COUNT} groups, found {}", groups.len()),
            ));
        }

        let mut by_name = HashMap::new();
        let mut slots: Vec<Option<NswType>> = vec![None; LEAF_COUNT];
        for (lineno, id, name, superclass, tags) in raw {
            if by_name.contains_key(&name) {
                return Err(err(Some(lineno), format!("duplicate type name `{name}`")));
            }
            let index = id as usize;
            if index >= LEAF_COUNT {
                return Err(err(
                    Some(lineno),
                    format!("id {id} out of range 0..{LEAF_COUNT}"),
                ));
            }
            if slots[index].is_some() {
                return Err(err(Some(lineno), format!("duplicate id {id}")));
            }
            if !superclass.slots().contains(&index) {
                return Err(err(
                    Some(lineno),
                    format!("id {id} lies outside the {superclass} slot range {:?}", superclass.slots()),
                ));
            }
            let mut group_idx = Vec::with_capacity(tags.len());
            for tag in tags {
                let g = groups
                    .iter()
                    .position(|g| *g == tag)
                    .ok_or_else(|| err(Some(lineno), format!("unknown group `{tag}`")))?;
                group_idx.push(g);
            }
            by_name.insert(name.clone(), NswTypeId(id));
            slots[index] = Some(NswType {
                id: NswTypeId(id),
                name,
                superclass,
                groups: group_idx,
            });
        }

        let missing: Vec<usize> = (0..LEAF_COUNT).filter(|&i| slots[i].is_none()).collect();
        if !missing.is_empty() {
            let described: Vec<String> = missing
                .iter()
                .map(|&i| {
                    let sc = Superclass::ALL
                        .into_iter()
                        .find(|s| s.slots().contains(&i))
                        .expect("slot ranges cover 0..56");
                    format!("{i} ({sc})")
                })
                .collect();
            return Err(err(
                None,
                format!(
                    "expected {LEAF_COUNT} leaves, found {}; missing slot(s): {}",
                    LEAF_COUNT - missing.len(),
                    described.join(", ")
                ),
            ));
        }

        let types: Vec<NswType> = slots.into_iter().map(|t| t.expect("checked")).collect();
        for sc in Superclass::ALL {
            let n = types.iter().filter(|t| t.superclass == sc).count();
            if n != sc.expected_count() {
                return Err(err(
                    None,
                    format!("{sc} has {n} leaves, expected {}", sc.expected_count()),
                ));
            }
        }

        Ok(Taxonomy {
            types,
            groups,
            by_name,
        })
    }
}

/// Reads and validates a taxonomy manifest from disk.
pub fn load_taxonomy(path: impl AsRef<Path>) -> Result<Taxonomy> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Taxonomy::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_counts() {
        let t = Taxonomy::builtin();
        assert_eq!(t.types().len(), 56);
        assert_eq!(t.count_by_superclass(Superclass::String), 15);
        assert_eq!(t.count_by_superclass(Superclass::Number), 21);
        assert_eq!(t.count_by_superclass(Superclass::Combined), 20);
        assert_eq!(t.groups().len(), 19);
        for (i, ty) in t.types().iter().enumerate() {
            assert_eq!(ty.id.index(), i);
            assert!(ty.superclass.slots().contains(&i));
        }
    }

    #[test]
    fn missing_leaf_is_named() {
        let manifest: String = DEFAULT_MANIFEST
            .lines()
            .filter(|l| !l.starts_with("42\t"))
            .map(|l| format!("{l}\n"))
            .collect();
        let e = Taxonomy::parse(&manifest).unwrap_err().to_string();
        assert!(e.contains("found 55"), "{e}");
        assert!(e.contains("42 (COMBINED)"), "{e}");
    }

    #[test]
    fn duplicate_name_is_named() {
        let manifest = DEFAULT_MANIFEST.replace("\tproportion\t", "\ttime\t");
        let e = Taxonomy::parse(&manifest).unwrap_err().to_string();
        assert!(e.contains("duplicate type name `time`"), "{e}");
    }

    #[test]
    fn wrong_superclass_block() {
        let manifest = DEFAULT_MANIFEST.replace("17\ttime\tNUMBER", "17\ttime\tSTRING");
        let e = Taxonomy::parse(&manifest).unwrap_err().to_string();
        assert!(e.contains("outside the STRING slot range"), "{e}");
    }

    #[test]
    fn unknown_group_tag() {
        let manifest = DEFAULT_MANIFEST.replace("17\ttime\tNUMBER", "17\ttime\tNUMBER\tclocks");
        let e = Taxonomy::parse(&manifest).unwrap_err().to_string();
        assert!(e.contains("unknown group `clocks`"), "{e}");
    }

    #[test]
    fn every_group_has_members() {
        let t = Taxonomy::builtin();
        for g in 0..t.groups().len() {
            assert!(t.group_members(g).count() > 0, "group {} empty", t.groups()[g]);
        }
    }
}
