use std::collections::HashMap;

use crate::error::{Error, Result};

/// Per-node class labels with dense class ids `0..class_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDataset {
    labels: Vec<usize>,
    class_names: Vec<String>,
}

impl LabeledDataset {
    /// Assigns class ids in order of first appearance.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut class_names = Vec::new();
        let labels = names
            .iter()
            .map(|name| {
                let name = name.as_ref();
                *index.entry(name).or_insert_with(|| {
                    class_names.push(name.to_owned());
                    class_names.len() - 1
                })
            })
            .collect();
        LabeledDataset { labels, class_names }
    }

    /// Class ids must be dense: every id below the maximum appears.
    pub fn from_ids(labels: Vec<usize>) -> Result<Self> {
        let class_count = labels.iter().max().map_or(0, |&m| m + 1);
        let mut present = vec![false; class_count];
        for &l in &labels {
            present[l] = true;
        }
        if let Some(gap) = present.iter().position(|&p| !p) {
            return Err(Error::InvalidParameter(format!(
                "class ids are not dense: id {gap} is unused"
            )));
        }
        let class_names = (0..class_count).map(|c| c.to_string()).collect();
        Ok(LabeledDataset { labels, class_names })
    }

    pub(crate) fn from_parts(labels: Vec<usize>, class_names: Vec<String>) -> Self {
        LabeledDataset { labels, class_names }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn name_of(&self, node: usize) -> &str {
        &self.class_names[self.labels[node]]
    }

    /// Members of each class, in node order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (node, &l) in self.labels.iter().enumerate() {
            out[l].push(node);
        }
        out
    }
}
