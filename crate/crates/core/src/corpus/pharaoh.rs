//! Reading and writing of word-alignment files.
//!
//! One line per sentence pair; each whitespace-separated item is `i-j` with
//! 0-based source and target token offsets. Internally indices are 1-based,
//! so offsets shift by one on the way in and out. A blank line is a pair
//! with no links.

use crate::error::{Error, Result};

use super::Alignment;

/// Parse an alignment file into one [`Alignment`] per input line.
pub fn read_alignments(text: &str) -> Result<Vec<Alignment>> {
    let mut alignments = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        let mut links = Vec::new();
        for item in line.split_whitespace() {
            let (s, t) = item.split_once('-').ok_or_else(|| {
                Error::parse(lineno, format!("bad alignment link {:?}", item))
            })?;
            let s: i64 = s.parse().map_err(|_| {
                Error::parse(lineno, format!("bad alignment link {:?}", item))
            })?;
            let t: i64 = t.parse().map_err(|_| {
                Error::parse(lineno, format!("bad alignment link {:?}", item))
            })?;
            if s < 0 || t < 0 {
                return Err(Error::parse(
                    lineno,
                    format!("negative index in alignment link {:?}", item),
                ));
            }
            links.push((s as usize + 1, t as usize + 1));
        }
        alignments
            .push(Alignment::new(links).map_err(|e| Error::parse(lineno, e.to_string()))?);
    }
    Ok(alignments)
}

/// Render alignments in the same format accepted by [`read_alignments`]:
/// one line per pair, links sorted, 0-based offsets.
pub fn write_alignments(alignments: &[Alignment]) -> String {
    let mut out = String::new();
    for alignment in alignments {
        let items: Vec<String> = alignment
            .links()
            .map(|(s, t)| format!("{}-{}", s - 1, t - 1))
            .collect();
        out.push_str(&items.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn reads_links_as_one_based() {
        let alignments = read_alignments("0-0 1-4 3-3 4-1 4-2 5-1\n").unwrap();
        assert_eq!(alignments.len(), 1);
        let got: BTreeSet<(usize, usize)> = alignments[0].links().collect();
        let want: BTreeSet<(usize, usize)> =
            [(1, 1), (2, 5), (4, 4), (5, 2), (5, 3), (6, 2)].into_iter().collect();
        assert_eq!(got, want);
        assert_eq!(alignments[0].min_target(5), Some(2));
        assert_eq!(alignments[0].min_source(2), Some(5));
    }

    #[test]
    fn blank_line_is_empty_alignment() {
        let alignments = read_alignments("0-0\n\n1-1\n").unwrap();
        assert_eq!(alignments.len(), 3);
        assert!(alignments[1].is_empty());
    }

    #[test]
    fn duplicate_links_collapse() {
        let alignments = read_alignments("0-0 0-0 0-0\n").unwrap();
        assert_eq!(alignments[0].len(), 1);
    }

    #[test]
    fn rejects_malformed_link_with_line_number() {
        let err = read_alignments("0-0\n1:2\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "got: {err}");
    }

    #[test]
    fn rejects_negative_index() {
        let err = read_alignments("-1-0\n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "got: {err}");
    }

    #[test]
    fn rejects_non_numeric_parts() {
        assert!(read_alignments("a-0\n").is_err());
        assert!(read_alignments("0-\n").is_err());
    }

    #[test]
    fn round_trips() {
        let text = "0-0 1-4 3-3\n\n2-2\n";
        let alignments = read_alignments(text).unwrap();
        assert_eq!(write_alignments(&alignments), text);
    }
}
