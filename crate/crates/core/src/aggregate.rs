//! Area-level productivity: each sector value is divided by the mean over all
//! universities staffed in that sector, then averaged with staff weights.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::indicators::{
    all_sector_indicators, sector_indicators, IndicatorKind, SectorIndicators,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaProductivity {
    pub university_id: String,
    pub area_id: String,
    pub kind: IndicatorKind,
    pub value: f64,
    pub total_staff: f64,
}

/// One sector's contribution to an area aggregate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorInput {
    /// The university's productivity in the sector; `None` when it has no
    /// staff there.
    pub value: Option<f64>,
    /// Mean productivity of all staffed universities in the sector.
    pub mean: f64,
    pub staff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSector {
    pub normalized: f64,
    pub weighted: f64,
}

/// Per-sector normalized and weighted values plus the area aggregate and the
/// total staff. Sectors without a value are skipped; sectors with a zero mean
/// normalize to 0 but keep their staff in the denominator.
pub fn staff_weighted(inputs: &[SectorInput]) -> Option<(Vec<Option<WeightedSector>>, f64, f64)> {
    let total_staff: f64 = inputs
        .iter()
        .filter(|i| i.value.is_some())
        .map(|i| i.staff)
        .sum();
    if total_staff <= 0.0 {
        return None;
    }
    let mut aggregate = 0.0;
    let parts = inputs
        .iter()
        .map(|i| {
            let value = i.value?;
            let normalized = if i.mean > 0.0 { value / i.mean } else { 0.0 };
            let weighted = normalized * i.staff / total_staff;
            aggregate += weighted;
            Some(WeightedSector {
                normalized,
                weighted,
            })
        })
        .collect();
    Some((parts, aggregate, total_staff))
}

fn mean_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Unweighted mean of the sector productivity over universities with staff
/// in the sector, zero-output universities included.
pub fn sector_mean(corpus: &Corpus, sector: &str, kind: IndicatorKind) -> Result<f64> {
    corpus.sector(sector)?;
    let mut values = Vec::new();
    for s in corpus
        .staff_records()
        .filter(|s| s.sector_code == sector && s.headcount > 0.0)
    {
        let ind = sector_indicators(corpus, &s.university_id, sector)?;
        values.extend(ind.productivity(kind));
    }
    mean_of(values.into_iter()).ok_or_else(|| Error::NoStaffInSector(sector.to_string()))
}

pub fn aggregate_area(
    corpus: &Corpus,
    university_id: &str,
    area_id: &str,
    kind: IndicatorKind,
) -> Result<AreaProductivity> {
    let mut inputs = Vec::new();
    for sector in corpus.sectors_in_area(area_id)? {
        let ind = sector_indicators(corpus, university_id, sector)?;
        let value = ind.productivity(kind);
        let mean = match value {
            Some(_) => sector_mean(corpus, sector, kind)?,
            None => 0.0,
        };
        inputs.push(SectorInput {
            value,
            mean,
            staff: ind.staff,
        });
    }
    let (_, value, total_staff) = staff_weighted(&inputs).ok_or_else(|| Error::NoStaffInArea {
        university: university_id.to_string(),
        area: area_id.to_string(),
    })?;
    Ok(AreaProductivity {
        university_id: university_id.to_string(),
        area_id: area_id.to_string(),
        kind,
        value,
        total_staff,
    })
}

/// Sector indicators of a whole corpus, computed once and reused for means
/// and aggregates.
#[derive(Debug)]
pub struct ProductivityTable {
    by_key: BTreeMap<(String, String), SectorIndicators>,
    sectors_by_area: BTreeMap<String, Vec<String>>,
}

impl ProductivityTable {
    pub fn new(corpus: &Corpus) -> Result<Self> {
        let by_key = all_sector_indicators(corpus)?
            .into_iter()
            .map(|i| ((i.university_id.clone(), i.sector_code.clone()), i))
            .collect();
        let sectors_by_area = corpus
            .areas()
            .keys()
            .map(|a| {
                let sectors = corpus
                    .sectors_in_area(a)
                    .map(<[String]>::to_vec)
                    .unwrap_or_default();
                (a.clone(), sectors)
            })
            .collect();
        Ok(ProductivityTable {
            by_key,
            sectors_by_area,
        })
    }

    pub fn indicators(&self) -> impl Iterator<Item = &SectorIndicators> {
        self.by_key.values()
    }

    /// Sector means for one kind; sectors without staffed universities are
    /// absent.
    pub fn sector_means(&self, kind: IndicatorKind) -> BTreeMap<String, f64> {
        let mut grouped: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for ind in self.by_key.values() {
            if let Some(v) = ind.productivity(kind) {
                grouped.entry(ind.sector_code.as_str()).or_default().push(v);
            }
        }
        grouped
            .into_iter()
            .filter_map(|(s, v)| mean_of(v.into_iter()).map(|m| (s.to_string(), m)))
            .collect()
    }

    /// Aggregates for every (university, area) with staff in the area,
    /// ordered by area then university.
    pub fn area_productivity(&self, kind: IndicatorKind) -> Vec<AreaProductivity> {
        let means = self.sector_means(kind);
        let universities: std::collections::BTreeSet<&str> =
            self.by_key.keys().map(|(u, _)| u.as_str()).collect();
        let mut out = Vec::new();
        for (area, sectors) in &self.sectors_by_area {
            for &u in &universities {
                let inputs: Vec<SectorInput> = sectors
                    .iter()
                    .map(|s| {
                        let ind = self.by_key.get(&(u.to_string(), s.clone()));
                        let value = ind.and_then(|i| i.productivity(kind));
                        SectorInput {
                            value,
                            mean: means.get(s).copied().unwrap_or(0.0),
                            staff: ind.map(|i| i.staff).unwrap_or(0.0),
                        }
                    })
                    .collect();
                if let Some((_, value, total_staff)) = staff_weighted(&inputs) {
                    out.push(AreaProductivity {
                        university_id: u.to_string(),
                        area_id: area.clone(),
                        kind,
                        value,
                        total_staff,
                    });
                }
            }
        }
        out
    }
}
