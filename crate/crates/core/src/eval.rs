//! Attachment-site evaluation: gold prepositional-phrase annotations,
//! paired baseline-versus-corrected scoring, the two-column accuracy
//! report, and the iteration-budget sweep.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::agreement::{coordinate_descent, AgreementConfig, ModelSet, Side};
use crate::corpus::{BitextPair, DependencyTree, ParsedSentence};
use crate::error::{Error, Result};

/// One manually annotated attachment decision: which token the preposition
/// at `prep_index` should hang from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPInstance {
    pub sentence_id: String,
    pub prep_index: usize,
    pub gold_head: usize,
}

/// Parse the gold annotation format: one `sentence_id<TAB>prep_index<TAB>
/// gold_head` line per instance, 1-based indices, `#` lines and blank
/// lines ignored.
pub fn parse_pp_gold(text: &str) -> Result<Vec<PPInstance>> {
    let mut instances = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                line_no,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let sentence_id = fields[0].trim();
        if sentence_id.is_empty() {
            return Err(Error::parse(line_no, "empty sentence id".to_string()));
        }
        let index_field = |name: &str, value: &str| -> Result<usize> {
            let parsed: usize = value.trim().parse().map_err(|_| {
                Error::parse(line_no, format!("{name} is not a non-negative integer: {value:?}"))
            })?;
            if parsed == 0 {
                return Err(Error::parse(line_no, format!("{name} must be 1-based, found 0")));
            }
            Ok(parsed)
        };
        instances.push(PPInstance {
            sentence_id: sentence_id.to_string(),
            prep_index: index_field("prep_index", fields[1])?,
            gold_head: index_field("gold_head", fields[2])?,
        });
    }
    Ok(instances)
}

/// Serialize instances back to the gold annotation format.
pub fn write_pp_gold(instances: &[PPInstance]) -> String {
    let mut out = String::new();
    for inst in instances {
        let _ = writeln!(out, "{}\t{}\t{}", inst.sentence_id, inst.prep_index, inst.gold_head);
    }
    out
}

/// Token indices whose POS equals `prep_tag`, ascending. A convenience for
/// fixture authoring; scoring always trusts the gold file.
pub fn find_pp_candidates(sentence: &ParsedSentence, prep_tag: &str) -> Vec<usize> {
    sentence
        .tokens()
        .iter()
        .filter(|t| t.pos() == prep_tag)
        .map(|t| t.index())
        .collect()
}

/// Exact rendering of `100 * correct / total` to two decimals, rounding
/// half up in integer arithmetic; `total == 0` renders as "0.00".
pub fn percent_2dp(correct: usize, total: usize) -> String {
    if total == 0 {
        return "0.00".to_string();
    }
    // Hundredths of a percent, rounded half up: 10000*c/t is exact as an
    // integer division with remainder.
    let numerator = correct as u128 * 10_000;
    let denominator = total as u128;
    let mut hundredths = numerator / denominator;
    if (numerator % denominator) * 2 >= denominator {
        hundredths += 1;
    }
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// One prediction set's tally against the gold instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachmentScore {
    pub correct: usize,
    pub total: usize,
    /// Per instance, in input order: the predicted head and whether it
    /// matches gold.
    pub verdicts: Vec<(usize, bool)>,
}

impl AttachmentScore {
    pub fn accuracy(&self) -> String {
        percent_2dp(self.correct, self.total)
    }
}

/// Score one set of predicted trees against the gold instances. An
/// instance is correct iff the predicted head of its preposition equals
/// `gold_head`; labels and the rest of the tree are ignored.
pub fn score_attachments(
    predictions: &[(String, DependencyTree)],
    instances: &[PPInstance],
) -> Result<AttachmentScore> {
    let mut by_id: BTreeMap<&str, &DependencyTree> = BTreeMap::new();
    for (id, tree) in predictions {
        if by_id.insert(id.as_str(), tree).is_some() {
            return Err(Error::Eval(format!("duplicate sentence id {id:?}")));
        }
    }
    let mut verdicts = Vec::with_capacity(instances.len());
    let mut correct = 0;
    for inst in instances {
        let tree = by_id.get(inst.sentence_id.as_str()).ok_or_else(|| {
            Error::Eval(format!("no prediction for sentence id {:?}", inst.sentence_id))
        })?;
        if inst.prep_index > tree.len() {
            return Err(Error::Eval(format!(
                "prep index {} out of range for sentence {:?} of {} tokens",
                inst.prep_index, inst.sentence_id, tree.len()
            )));
        }
        let predicted = tree.head_of(inst.prep_index);
        let ok = predicted == inst.gold_head;
        correct += usize::from(ok);
        verdicts.push((predicted, ok));
    }
    Ok(AttachmentScore { correct, total: instances.len(), verdicts })
}

/// Paired evaluation of the plain parser against the agreement-corrected
/// trees on one shared instance set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalReport {
    pub total: usize,
    pub correct_baseline: usize,
    pub correct_corrected: usize,
    /// Per instance: (instance, baseline head, baseline ok, corrected
    /// head, corrected ok).
    pub verdicts: Vec<(PPInstance, usize, bool, usize, bool)>,
}

impl EvalReport {
    /// Score both prediction sets against the same instances.
    pub fn paired(
        baseline: &[(String, DependencyTree)],
        corrected: &[(String, DependencyTree)],
        instances: &[PPInstance],
    ) -> Result<EvalReport> {
        let base = score_attachments(baseline, instances)?;
        let corr = score_attachments(corrected, instances)?;
        let verdicts = instances
            .iter()
            .zip(base.verdicts.iter().zip(corr.verdicts.iter()))
            .map(|(inst, (&(bh, bok), &(ch, cok)))| (inst.clone(), bh, bok, ch, cok))
            .collect();
        Ok(EvalReport {
            total: instances.len(),
            correct_baseline: base.correct,
            correct_corrected: corr.correct,
            verdicts,
        })
    }

    pub fn accuracy_baseline(&self) -> String {
        percent_2dp(self.correct_baseline, self.total)
    }

    pub fn accuracy_corrected(&self) -> String {
        percent_2dp(self.correct_corrected, self.total)
    }

    /// Two-column summary table, baseline beside corrected.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<28}{:>12}{:>12}", "", "Baseline", "Corrected");
        let _ = writeln!(
            out,
            "{:<28}{:>12}{:>12}",
            "Correct PP attachments", self.correct_baseline, self.correct_corrected
        );
        let _ = writeln!(
            out,
            "{:<28}{:>12}{:>12}",
            "Accuracy (%)",
            self.accuracy_baseline(),
            self.accuracy_corrected()
        );
        let _ = writeln!(out, "{:<28}{:>12}", "Total instances", self.total);
        out
    }
}

/// Fraction of tokens whose predicted head matches gold — a whole-tree
/// diagnostic, not the headline metric.
pub fn count_correct_heads(
    predicted: &DependencyTree,
    gold: &DependencyTree,
) -> Result<(usize, usize)> {
    if predicted.len() != gold.len() {
        return Err(Error::Mismatch(format!(
            "predicted tree has {} tokens, gold has {}",
            predicted.len(),
            gold.len()
        )));
    }
    let correct = (1..=predicted.len())
        .filter(|&d| predicted.head_of(d) == gold.head_of(d))
        .count();
    Ok((correct, predicted.len()))
}

/// One row of the iteration sweep: the outer budget, the tally, and the
/// exact accuracy rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub outer_iters: usize,
    pub correct: usize,
    pub total: usize,
    pub accuracy: String,
}

/// Run the full alternation once per outer-budget value and score the
/// chosen side's corrected trees each time. Deterministic: pairs are
/// processed in order and each budget starts fresh.
pub fn iteration_sweep(
    pairs: &[(String, BitextPair)],
    models: &ModelSet,
    cfg: &AgreementConfig,
    n_values: &[usize],
    instances: &[PPInstance],
    eval_side: Side,
) -> Result<Vec<SweepRow>> {
    if n_values.is_empty() {
        return Err(Error::Eval("iteration sweep needs at least one budget value".to_string()));
    }
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let run_cfg = AgreementConfig { outer_iters: n, ..cfg.clone() };
        run_cfg.validate()?;
        let mut predictions = Vec::with_capacity(pairs.len());
        for (id, pair) in pairs {
            let result = coordinate_descent(pair, models, &run_cfg)?;
            let tree = match eval_side {
                Side::Src => result.src_tree,
                Side::Tgt => result.tgt_tree,
            };
            predictions.push((id.clone(), tree));
        }
        let score = score_attachments(&predictions, instances)?;
        rows.push(SweepRow {
            outer_iters: n,
            correct: score.correct,
            total: score.total,
            accuracy: score.accuracy(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Alignment, Token};
    use crate::parser::Weights;
    use crate::projection::ProjectionModel;

    fn sentence(lang: &str, words: &[(&str, &str)]) -> ParsedSentence {
        let tokens = words
            .iter()
            .enumerate()
            .map(|(i, (form, pos))| Token::new(i + 1, *form, *pos).unwrap())
            .collect();
        ParsedSentence::new(lang, tokens).unwrap()
    }

    #[test]
    fn gold_file_round_trip() {
        let text = "# attachment gold\n\ns1\t5\t4\r\ns2\t3\t2\n";
        let instances = parse_pp_gold(text).unwrap();
        assert_eq!(instances.len(), 2);
        assert_eq!(instances[0].sentence_id, "s1");
        assert_eq!(instances[0].prep_index, 5);
        assert_eq!(instances[0].gold_head, 4);
        assert_eq!(write_pp_gold(&instances), "s1\t5\t4\ns2\t3\t2\n");
    }

    #[test]
    fn gold_file_errors_carry_line_numbers() {
        let err = parse_pp_gold("s1\t5\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
        let err = parse_pp_gold("# ok\ns1\t0\t4\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(parse_pp_gold("s1\tx\t4\n").is_err());
        assert!(parse_pp_gold("\t5\t4\n").is_err());
    }

    #[test]
    fn preposition_filter() {
        let s = sentence(
            "en",
            &[
                ("I", "PRP"),
                ("washed", "VBD"),
                ("the", "DT"),
                ("jeans", "NNS"),
                ("with", "IN"),
                ("pockets", "NN"),
            ],
        );
        assert_eq!(find_pp_candidates(&s, "IN"), vec![5]);
        assert_eq!(find_pp_candidates(&s, "XX"), Vec::<usize>::new());
        let two = sentence("en", &[("in", "IN"), ("x", "NN"), ("on", "IN")]);
        assert_eq!(find_pp_candidates(&two, "IN"), vec![1, 3]);
    }

    #[test]
    fn exact_percent_rendering() {
        assert_eq!(percent_2dp(54, 100), "54.00");
        assert_eq!(percent_2dp(13, 20), "65.00");
        assert_eq!(percent_2dp(1, 3), "33.33");
        assert_eq!(percent_2dp(2, 3), "66.67");
        assert_eq!(percent_2dp(1, 8), "12.50");
        // Exactly half a hundredth rounds up.
        assert_eq!(percent_2dp(1, 800), "0.13");
        assert_eq!(percent_2dp(0, 7), "0.00");
        assert_eq!(percent_2dp(7, 7), "100.00");
        assert_eq!(percent_2dp(0, 0), "0.00");
    }

    fn tree(heads: &[usize]) -> DependencyTree {
        DependencyTree::new(heads.to_vec()).unwrap()
    }

    #[test]
    fn attachment_scoring_counts_head_matches_only() {
        let predictions = vec![
            ("s1".to_string(), tree(&[2, 0, 2])),
            ("s2".to_string(), tree(&[0, 1, 2])),
        ];
        let instances = vec![
            PPInstance { sentence_id: "s1".into(), prep_index: 3, gold_head: 2 },
            PPInstance { sentence_id: "s2".into(), prep_index: 3, gold_head: 1 },
            PPInstance { sentence_id: "s2".into(), prep_index: 2, gold_head: 1 },
        ];
        let score = score_attachments(&predictions, &instances).unwrap();
        assert_eq!(score.correct, 2);
        assert_eq!(score.total, 3);
        assert_eq!(score.verdicts, vec![(2, true), (2, false), (1, true)]);
        assert_eq!(score.accuracy(), "66.67");
    }

    #[test]
    fn attachment_scoring_rejects_bad_references() {
        let predictions = vec![("s1".to_string(), tree(&[2, 0, 2]))];
        let missing = vec![PPInstance { sentence_id: "nope".into(), prep_index: 1, gold_head: 2 }];
        assert!(score_attachments(&predictions, &missing).is_err());
        let out_of_range =
            vec![PPInstance { sentence_id: "s1".into(), prep_index: 9, gold_head: 2 }];
        assert!(score_attachments(&predictions, &out_of_range).is_err());
        let dup = vec![
            ("s1".to_string(), tree(&[2, 0, 2])),
            ("s1".to_string(), tree(&[2, 0, 2])),
        ];
        assert!(score_attachments(&dup, &[]).is_err());
    }

    #[test]
    fn paired_report_renders_both_columns() {
        let baseline = vec![
            ("s1".to_string(), tree(&[2, 0, 2])),
            ("s2".to_string(), tree(&[2, 0, 2])),
        ];
        let corrected = vec![
            ("s1".to_string(), tree(&[2, 0, 1])),
            ("s2".to_string(), tree(&[2, 0, 2])),
        ];
        let instances = vec![
            PPInstance { sentence_id: "s1".into(), prep_index: 3, gold_head: 1 },
            PPInstance { sentence_id: "s2".into(), prep_index: 3, gold_head: 2 },
        ];
        let report = EvalReport::paired(&baseline, &corrected, &instances).unwrap();
        assert_eq!(report.correct_baseline, 1);
        assert_eq!(report.correct_corrected, 2);
        assert_eq!(report.accuracy_baseline(), "50.00");
        assert_eq!(report.accuracy_corrected(), "100.00");
        let table = report.render_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].contains("Baseline") && lines[0].contains("Corrected"));
        assert!(lines[1].contains("Correct PP attachments"));
        assert!(lines[1].ends_with("1           2"));
        assert!(lines[2].contains("50.00") && lines[2].contains("100.00"));
        assert!(lines[3].contains("Total instances") && lines[3].ends_with("2"));
    }

    #[test]
    fn head_agreement_diagnostic() {
        let (correct, total) = count_correct_heads(&tree(&[2, 0, 2]), &tree(&[2, 0, 1])).unwrap();
        assert_eq!((correct, total), (2, 3));
        assert!(count_correct_heads(&tree(&[0]), &tree(&[2, 0])).is_err());
    }

    #[test]
    fn sweep_runs_each_budget() {
        let src = sentence("en", &[("a", "X"), ("b", "V"), ("c", "IN")]);
        let tgt = sentence("hi", &[("p", "X"), ("q", "V"), ("r", "IN")]);
        let gold = tree(&[2, 0, 2]);
        let alignment = Alignment::new((1..=3).map(|i| (i, i))).unwrap();
        let pair = BitextPair::new(src, tgt, alignment, Some(gold.clone()), Some(gold)).unwrap();
        let mut parser = Weights::new();
        parser.set("pp=<root>|V", 5.0);
        parser.set("pp=V|X", 5.0);
        parser.set("pp=V|IN", 5.0);
        let models = ModelSet {
            src_lang: "en".into(),
            tgt_lang: "hi".into(),
            src_parser: parser.clone(),
            tgt_parser: parser,
            src_to_tgt: ProjectionModel::zero(),
            tgt_to_src: ProjectionModel::zero(),
        };
        let pairs = vec![("s1".to_string(), pair)];
        let instances =
            vec![PPInstance { sentence_id: "s1".into(), prep_index: 3, gold_head: 2 }];
        let cfg = AgreementConfig::default();
        let rows = iteration_sweep(&pairs, &models, &cfg, &[1, 5], &instances, Side::Src).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], SweepRow {
            outer_iters: 1,
            correct: 1,
            total: 1,
            accuracy: "100.00".to_string(),
        });
        // Zero projection models: every budget reproduces the baseline.
        assert_eq!(rows[0].correct, rows[1].correct);
        assert!(iteration_sweep(&pairs, &models, &cfg, &[], &instances, Side::Src).is_err());
    }
}
