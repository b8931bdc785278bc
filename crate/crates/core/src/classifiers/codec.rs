//! Binary model container. Layout (all integers little-endian, floats as
//! IEEE-754 bits) is described in `docs/model-format.md`.

use std::path::Path;

use super::{ClassifierKind, Model, ModelParams, NaiveBayes, Node, Scaling, Tree};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"NSWM";
pub const FORMAT_VERSION: u16 = 1;

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u16(&mut self, v: u16) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u32(&mut self, v: usize) {
        let v = u32::try_from(v).expect("model dimension exceeds u32");
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_bits().to_le_bytes());
    }
    fn f64s(&mut self, vs: &[f64]) {
        for &v in vs {
            self.f64(v);
        }
    }
    fn str(&mut self, s: &str) {
        self.u32(s.len());
        self.0.extend_from_slice(s.as_bytes());
    }
    fn tree(&mut self, t: &Tree) {
        self.u32(t.nodes().len());
        for n in t.nodes() {
            match *n {
                Node::Leaf { class } => {
                    self.u8(0);
                    self.u32(class);
                }
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    self.u8(1);
                    self.u32(feature);
                    self.f64(threshold);
                    self.u32(left);
                    self.u32(right);
                }
            }
        }
    }
}

pub fn serialize_model(model: &Model) -> Vec<u8> {
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MAGIC);
    w.u16(FORMAT_VERSION);
    w.u8(model.kind().tag());
    w.u32(model.feature_width);
    w.u32(model.class_names.len());
    for c in &model.class_names {
        w.str(c);
    }
    match &model.params {
        ModelParams::NaiveBayes(nb) => {
            for c in 0..model.class_names.len() {
                w.f64(nb.log_priors[c]);
                w.f64s(&nb.means[c]);
                w.f64s(&nb.variances[c]);
            }
        }
        ModelParams::Knn {
            k,
            scaling,
            rows,
            targets,
        } => {
            w.u32(*k);
            match scaling {
                Some(s) => {
                    w.u8(1);
                    w.f64s(&s.mins);
                    w.f64s(&s.ranges);
                }
                None => w.u8(0),
            }
            w.u32(rows.len());
            for (r, &t) in rows.iter().zip(targets) {
                w.u32(t);
                w.f64s(r);
            }
        }
        ModelParams::Tree(t) => w.tree(t),
        ModelParams::Forest(trees) => {
            w.u32(trees.len());
            for t in trees {
                w.tree(t);
            }
        }
    }
    w.0
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Decode {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&[u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(self.fail(format!(
                "truncated: {what} needs {n} bytes, {} left",
                self.bytes.len() - self.pos
            )));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self, what: &str) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().expect("4 bytes")) as usize)
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_bits(u64::from_le_bytes(self.take(8, what)?.try_into().expect("8 bytes"))))
    }

    fn f64s(&mut self, n: usize, what: &str) -> Result<Vec<f64>> {
        self.ensure(n, 8, what)?;
        (0..n).map(|_| self.f64(what)).collect()
    }

    /// Rejects a count whose items could not fit in the remaining bytes,
    /// before anything is allocated for them.
    fn ensure(&self, count: usize, min_item: usize, what: &str) -> Result<()> {
        if count.saturating_mul(min_item) > self.bytes.len() - self.pos {
            return Err(self.fail(format!("{what}: count {count} exceeds remaining data")));
        }
        Ok(())
    }

    fn index(&mut self, bound: usize, what: &str) -> Result<usize> {
        let at = self.pos;
        let v = self.u32(what)?;
        if v >= bound {
            return Err(Error::Decode {
                offset: at,
                message: format!("{what} {v} out of range (< {bound})"),
            });
        }
        Ok(v)
    }

    fn tree(&mut self, width: usize, classes: usize) -> Result<Tree> {
        let n = self.u32("node count")?;
        if n == 0 {
            return Err(self.fail("tree with no nodes"));
        }
        self.ensure(n, 5, "nodes")?;
        let mut nodes = Vec::with_capacity(n);
        for at in 0..n {
            let tag_at = self.pos;
            match self.u8("node tag")? {
                0 => nodes.push(Node::Leaf {
                    class: self.index(classes, "leaf class")?,
                }),
                1 => {
                    let feature = self.index(width, "split feature")?;
                    let threshold = self.f64("threshold")?;
                    let child_at = self.pos;
                    let left = self.index(n, "left child")?;
                    let right = self.index(n, "right child")?;
                    if left <= at || right <= at {
                        return Err(Error::Decode {
                            offset: child_at,
                            message: format!("node {at} points back to an earlier node"),
                        });
                    }
                    nodes.push(Node::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    });
                }
                t => {
                    return Err(Error::Decode {
                        offset: tag_at,
                        message: format!("unknown node tag {t}"),
                    })
                }
            }
        }
        Ok(Tree::from_nodes(nodes))
    }
}

pub fn deserialize_model(bytes: &[u8]) -> Result<Model> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4, "magic")? != MAGIC {
        return Err(Error::Decode {
            offset: 0,
            message: "not a model file (bad magic)".into(),
        });
    }
    let version = r.u16("version")?;
    if version != FORMAT_VERSION {
        return Err(Error::Decode {
            offset: 4,
            message: format!("unsupported format version {version}"),
        });
    }
    let kind_at = r.pos;
    let kind = match r.u8("kind")? {
        0 => ClassifierKind::NaiveBayes,
        1 => ClassifierKind::Knn,
        2 => ClassifierKind::Tree,
        3 => ClassifierKind::Forest,
        t => {
            return Err(Error::Decode {
                offset: kind_at,
                message: format!("unknown classifier tag {t}"),
            })
        }
    };
    let width = r.u32("feature width")?;
    let classes = r.u32("class count")?;
    if classes == 0 {
        return Err(r.fail("model with no classes"));
    }
    r.ensure(classes, 4, "class names")?;
    let mut class_names = Vec::with_capacity(classes);
    for _ in 0..classes {
        let len = r.u32("name length")?;
        let at = r.pos;
        let raw = r.take(len, "class name")?;
        let name = std::str::from_utf8(raw).map_err(|e| Error::Decode {
            offset: at + e.valid_up_to(),
            message: "class name is not UTF-8".into(),
        })?;
        class_names.push(name.to_string());
    }

    let params = match kind {
        ClassifierKind::NaiveBayes => {
            let mut nb = NaiveBayes {
                log_priors: Vec::new(),
                means: Vec::new(),
                variances: Vec::new(),
            };
            for _ in 0..classes {
                nb.log_priors.push(r.f64("log prior")?);
                nb.means.push(r.f64s(width, "means")?);
                nb.variances.push(r.f64s(width, "variances")?);
            }
            ModelParams::NaiveBayes(nb)
        }
        ClassifierKind::Knn => {
            let k = r.u32("k")?;
            if k == 0 {
                return Err(r.fail("k must be positive"));
            }
            let scaling = match r.u8("scaling flag")? {
                0 => None,
                1 => Some(Scaling {
                    mins: r.f64s(width, "scaling minimums")?,
                    ranges: r.f64s(width, "scaling ranges")?,
                }),
                f => return Err(r.fail(format!("bad scaling flag {f}"))),
            };
            let n = r.u32("row count")?;
            r.ensure(n, 4 + 8 * width, "rows")?;
            let mut rows = Vec::with_capacity(n);
            let mut targets = Vec::with_capacity(n);
            for _ in 0..n {
                targets.push(r.index(classes, "row class")?);
                rows.push(r.f64s(width, "row")?);
            }
            ModelParams::Knn {
                k,
                scaling,
                rows,
                targets,
            }
        }
        ClassifierKind::Tree => ModelParams::Tree(r.tree(width, classes)?),
        ClassifierKind::Forest => {
            let n = r.u32("tree count")?;
            if n == 0 {
                return Err(r.fail("forest with no trees"));
            }
            r.ensure(n, 10, "trees")?;
            let trees = (0..n).map(|_| r.tree(width, classes)).collect::<Result<Vec<_>>>()?;
            ModelParams::Forest(trees)
        }
    };
    if r.pos != bytes.len() {
        return Err(r.fail(format!("{} trailing bytes", bytes.len() - r.pos)));
    }
    Ok(Model {
        class_names,
        feature_width: width,
        params,
    })
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, serialize_model(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    deserialize_model(&bytes)
}
