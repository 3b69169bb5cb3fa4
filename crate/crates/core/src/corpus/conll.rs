//! Reading and writing of tab-separated dependency treebanks.
//!
//! Each token is one line of ten tab-separated columns; sentences are
//! separated by blank lines. Of the ten columns this crate uses the token id
//! (column 1), the surface form (column 2), the POS tag (column 5), and the
//! head (column 7); every other column is written as and may contain `_`.
//! A sentence whose head column is `_` throughout carries no tree.

use crate::error::{Error, Result};

use super::{DependencyTree, ParsedSentence, Token};

/// One sentence plus its tree, if the file provided one.
pub type TreebankEntry = (ParsedSentence, Option<DependencyTree>);

/// Parse an entire treebank file. `lang` is attached to every sentence.
///
/// Errors carry the 1-based line number of the offending input line.
pub fn read_conll(text: &str, lang: &str) -> Result<Vec<TreebankEntry>> {
    let mut entries = Vec::new();
    // (line number, columns) for each token line of the current sentence.
    let mut current: Vec<(usize, Vec<String>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.is_empty() {
                entries.push(build_entry(&current, lang)?);
                current.clear();
            }
            continue;
        }
        let cols: Vec<String> = line.split('\t').map(str::to_owned).collect();
        if cols.len() != 10 {
            return Err(Error::parse(
                lineno,
                format!("expected 10 tab-separated columns, found {}", cols.len()),
            ));
        }
        current.push((lineno, cols));
    }
    if !current.is_empty() {
        entries.push(build_entry(&current, lang)?);
    }
    Ok(entries)
}

fn build_entry(lines: &[(usize, Vec<String>)], lang: &str) -> Result<TreebankEntry> {
    let first_line = lines[0].0;
    let n = lines.len();
    let mut tokens = Vec::with_capacity(n);
    let mut heads: Vec<usize> = Vec::with_capacity(n);
    let mut absent = 0usize;

    for (pos, (lineno, cols)) in lines.iter().enumerate() {
        let expected = pos + 1;
        let id: usize = cols[0]
            .parse()
            .map_err(|_| Error::parse(*lineno, format!("bad token id {:?}", cols[0])))?;
        if id != expected {
            return Err(Error::parse(
                *lineno,
                format!("token id {} out of order; expected {}", id, expected),
            ));
        }
        if cols[1].is_empty() || cols[4].is_empty() {
            return Err(Error::parse(*lineno, "empty form or POS column"));
        }
        tokens.push(
            Token::new(expected, cols[1].clone(), cols[4].clone())
                .map_err(|e| Error::parse(*lineno, e.to_string()))?,
        );
        if cols[6] == "_" {
            absent += 1;
            heads.push(0); // placeholder, unused when the tree is absent
        } else {
            let head: usize = cols[6].parse().map_err(|_| {
                Error::parse(*lineno, format!("bad head value {:?}", cols[6]))
            })?;
            heads.push(head);
        }
    }

    let sentence = ParsedSentence::new(lang, tokens)
        .map_err(|e| Error::parse(first_line, e.to_string()))?;

    let tree = if absent == n {
        None
    } else if absent == 0 {
        Some(
            DependencyTree::new(heads)
                .map_err(|e| Error::parse(first_line, e.to_string()))?,
        )
    } else {
        return Err(Error::parse(
            first_line,
            "head column mixes numbers and '_' within one sentence",
        ));
    };

    Ok((sentence, tree))
}

/// Render entries in the same ten-column format accepted by [`read_conll`].
///
/// The output ends with a blank line after the final sentence, so files can
/// be concatenated and re-read.
pub fn write_conll(entries: &[TreebankEntry]) -> String {
    let mut out = String::new();
    for (sentence, tree) in entries {
        for token in sentence.tokens() {
            let head = match tree {
                Some(t) => t.head_of(token.index()).to_string(),
                None => "_".to_string(),
            };
            out.push_str(&format!(
                "{}\t{}\t_\t_\t{}\t_\t{}\t_\t_\t_\n",
                token.index(),
                token.form(),
                token.pos(),
                head
            ));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(id: usize, form: &str, pos: &str, head: &str) -> String {
        format!("{id}\t{form}\t_\t_\t{pos}\t_\t{head}\t_\t_\t_")
    }

    #[test]
    fn reads_sentence_with_tree() {
        let text = [
            line(1, "I", "PRP", "2"),
            line(2, "washed", "VBD", "0"),
            line(3, "the", "DT", "4"),
            line(4, "jeans", "NNS", "2"),
            line(5, "with", "IN", "4"),
            line(6, "soap", "NN", "5"),
        ]
        .join("\n");
        let entries = read_conll(&text, "en").unwrap();
        assert_eq!(entries.len(), 1);
        let (sentence, tree) = &entries[0];
        assert_eq!(sentence.lang(), "en");
        assert_eq!(sentence.len(), 6);
        assert_eq!(sentence.form(4), "jeans");
        assert_eq!(sentence.pos(5), "IN");
        assert_eq!(tree.as_ref().unwrap().heads(), &[2, 0, 4, 2, 4, 5]);
    }

    #[test]
    fn reads_multiple_sentences_and_missing_trees() {
        let text = format!(
            "{}\n{}\n\n{}\n{}\n",
            line(1, "a", "X", "2"),
            line(2, "b", "Y", "0"),
            line(1, "c", "Z", "_"),
            line(2, "d", "Z", "_"),
        );
        let entries = read_conll(&text, "xx").unwrap();
        assert_eq!(entries.len(), 2);
        assert!(entries[0].1.is_some());
        assert!(entries[1].1.is_none());
    }

    #[test]
    fn rejects_wrong_column_count_with_line_number() {
        let text = format!("{}\n1\tb\tY\n", line(1, "a", "X", "0"));
        let err = read_conll(&text, "xx").unwrap_err();
        assert!(err.to_string().contains("line 2"), "got: {err}");
        assert!(err.to_string().contains("10 tab-separated columns"));
    }

    #[test]
    fn rejects_out_of_order_ids() {
        let text = format!("{}\n{}\n", line(1, "a", "X", "0"), line(3, "b", "X", "1"));
        let err = read_conll(&text, "xx").unwrap_err();
        assert!(err.to_string().contains("line 2"), "got: {err}");
    }

    #[test]
    fn rejects_mixed_head_column() {
        let text = format!("{}\n{}\n", line(1, "a", "X", "0"), line(2, "b", "X", "_"));
        let err = read_conll(&text, "xx").unwrap_err();
        assert!(err.to_string().contains("mixes"), "got: {err}");
    }

    #[test]
    fn rejects_bad_head_value() {
        let text = line(1, "a", "X", "x1");
        let err = read_conll(&text, "xx").unwrap_err();
        assert!(err.to_string().contains("bad head value"), "got: {err}");
    }

    #[test]
    fn rejects_cyclic_tree_at_first_sentence_line() {
        let text = format!(
            "{}\n{}\n{}\n",
            line(1, "a", "X", "2"),
            line(2, "b", "X", "1"),
            line(3, "c", "X", "0"),
        );
        let err = read_conll(&text, "xx").unwrap_err();
        assert!(err.to_string().contains("line 1"), "got: {err}");
        assert!(err.to_string().contains("cycle"), "got: {err}");
    }

    #[test]
    fn round_trips_through_write() {
        let text = format!(
            "{}\n{}\n\n{}\n",
            line(1, "a", "X", "2"),
            line(2, "b", "Y", "0"),
            line(1, "solo", "Z", "_"),
        );
        let entries = read_conll(&text, "xx").unwrap();
        let written = write_conll(&entries);
        let reread = read_conll(&written, "xx").unwrap();
        assert_eq!(entries, reread);
        assert_eq!(written, write_conll(&reread));
    }

    #[test]
    fn handles_crlf_input() {
        let text = format!("{}\r\n{}\r\n", line(1, "a", "X", "0"), line(2, "b", "X", "1"));
        let entries = read_conll(&text, "xx").unwrap();
        assert_eq!(entries[0].1.as_ref().unwrap().heads(), &[0, 1]);
    }
}
