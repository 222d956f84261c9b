use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One integral 1..=5 quality rating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaterScore {
    pub image_id: String,
    pub rater_id: String,
    pub method: String,
    pub score: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MosSummary {
    pub mean: f64,
    /// Population standard deviation over individual scores.
    pub stddev: f64,
    pub rater_count: usize,
    pub score_count: usize,
}

/// Mean opinion score per method.
pub fn mos_aggregate(scores: &[RaterScore]) -> Result<BTreeMap<String, MosSummary>> {
    if scores.is_empty() {
        return Err(Error::EmptyScores);
    }
    if let Some(bad) = scores.iter().find(|s| !(1..=5).contains(&s.score)) {
        return Err(Error::ScoreOutOfRange { score: bad.score });
    }
    let mut by_method: BTreeMap<&str, Vec<&RaterScore>> = BTreeMap::new();
    for s in scores {
        by_method.entry(&s.method).or_default().push(s);
    }
    Ok(by_method
        .into_iter()
        .map(|(method, rows)| {
            let n = rows.len() as f64;
            let mean = rows.iter().map(|r| r.score as f64).sum::<f64>() / n;
            let var = rows.iter().map(|r| (r.score as f64 - mean).powi(2)).sum::<f64>() / n;
            let raters: BTreeSet<&str> = rows.iter().map(|r| r.rater_id.as_str()).collect();
            let summary = MosSummary {
                mean,
                stddev: var.sqrt(),
                rater_count: raters.len(),
                score_count: rows.len(),
            };
            (method.to_string(), summary)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(method: &str, scores: &[i64]) -> Vec<RaterScore> {
        scores
            .iter()
            .enumerate()
            .map(|(i, &score)| RaterScore {
                image_id: format!("img{}", i % 2),
                rater_id: format!("r{i}"),
                method: method.into(),
                score,
            })
            .collect()
    }

    #[test]
    fn constant_scores() {
        let s = mos_aggregate(&rows("ours", &[3, 3, 3, 3])).unwrap();
        assert_eq!(s["ours"].mean, 3.0);
        assert_eq!(s["ours"].stddev, 0.0);
        assert_eq!(s["ours"].rater_count, 4);
    }

    #[test]
    fn three_four_five() {
        let mut all = rows("a", &[3, 4, 5]);
        all.extend(rows("b", &[1, 5]));
        let s = mos_aggregate(&all).unwrap();
        assert_eq!(s["a"].mean, 4.0);
        assert!((s["a"].stddev - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s["a"].stddev - 0.8165).abs() < 1e-4);
        assert_eq!(s["b"].mean, 3.0);
        assert_eq!(s["b"].stddev, 2.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(mos_aggregate(&[]), Err(Error::EmptyScores)));
        assert!(matches!(
            mos_aggregate(&rows("a", &[3, 6])),
            Err(Error::ScoreOutOfRange { score: 6 })
        ));
        assert!(mos_aggregate(&rows("a", &[0])).is_err());
    }
}
