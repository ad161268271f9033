use super::parse::DirectiveRecord;
use crate::model::{upsert_widget, ModelError, UpsertOutcome, UpsertPolicy, WidgetCollection};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeOptions {
    pub preserve_state: bool,
}

impl Default for MergeOptions {
    fn default() -> Self {
        Self {
            preserve_state: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MergeReport {
    pub created: usize,
    pub updated: usize,
    pub unchanged: usize,
}

/// Applies parsed records to a copy of `coll` in order. On error the input
/// collection is untouched.
///
/// A `SIMULATION` record renames the collection's context; loading an
/// existing context of that name first is the caller's job.
pub fn merge_into_collection(
    records: &[DirectiveRecord],
    coll: &WidgetCollection,
    options: MergeOptions,
) -> Result<(WidgetCollection, MergeReport), ModelError> {
    let policy = if options.preserve_state {
        UpsertPolicy::PreserveState
    } else {
        UpsertPolicy::Overwrite
    };
    let mut out = coll.clone();
    let mut report = MergeReport::default();
    for r in records {
        match r {
            DirectiveRecord::Context(name) => out.context.name = name.clone(),
            DirectiveRecord::Widget(spec) => match upsert_widget(&mut out, spec.clone(), policy)? {
                UpsertOutcome::Created => report.created += 1,
                UpsertOutcome::Updated => report.updated += 1,
                UpsertOutcome::Unchanged => report.unchanged += 1,
            },
            // Already folded into their dictslider by `parse_directives`.
            DirectiveRecord::DictSliderItem(_) => {}
        }
    }
    Ok((out, report))
}
