use serde::Serialize;

/// A record that was skipped, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordFailure {
    pub image_id: String,
    pub reason: String,
}

/// Result of a batch step: the records that succeeded plus skip-and-report
/// diagnostics. A batch with failures still writes its manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutcome<T> {
    pub records: Vec<T>,
    pub failures: Vec<RecordFailure>,
    pub warnings: Vec<String>,
}

impl<T> BatchOutcome<T> {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn from_results(
        results: Vec<(String, crate::Result<T>)>,
        warnings: Vec<String>,
    ) -> Self {
        let mut records = Vec::new();
        let mut failures = Vec::new();
        for (image_id, r) in results {
            match r {
                Ok(rec) => records.push(rec),
                Err(e) => {
                    log::warn!("{image_id}: {e}");
                    failures.push(RecordFailure {
                        image_id,
                        reason: e.to_string(),
                    })
                }
            }
        }
        Self {
            records,
            failures,
            warnings,
        }
    }
}
