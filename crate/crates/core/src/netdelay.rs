//! Delay arithmetic for every execution tier under fixed link rates.

/// Bits in one kilobyte (1 KB = 1000 bytes).
pub const BITS_PER_KB: f64 = 8000.0;
const BITS_PER_MBIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayEstimate {
    pub total_s: f64,
    pub compute_s: f64,
    pub comm_s: f64,
}

impl DelayEstimate {
    fn new(compute_s: f64, comm_s: f64) -> Self {
        Self {
            total_s: compute_s + comm_s,
            compute_s,
            comm_s,
        }
    }

    /// Placeholder for a tier that cannot run the task at all.
    pub const INFINITE: Self = Self {
        total_s: f64::INFINITY,
        compute_s: f64::INFINITY,
        comm_s: 0.0,
    };

    /// Time until the uploaded task finishes computing.
    pub fn upload_and_compute_s(&self, upload_s: f64) -> f64 {
        upload_s + self.compute_s
    }
}

/// Payload sizes of one task as seen by the delay model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Payload {
    pub length_gi: f64,
    pub upload_kb: f64,
    pub download_kb: f64,
}

/// Seconds to push `kb` over a `rate_mbps` link.
pub fn transfer_s(kb: f64, rate_mbps: f64) -> f64 {
    if kb == 0.0 {
        0.0
    } else {
        kb * BITS_PER_KB / (rate_mbps * BITS_PER_MBIT)
    }
}

/// On-board execution at the owner's spare rate; zero spare never finishes.
pub fn local_delay(length_gi: f64, gips: f64) -> DelayEstimate {
    if gips <= 0.0 {
        return DelayEstimate::INFINITE;
    }
    DelayEstimate::new(length_gi / gips, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneratePool;

/// Coalition execution: one upload and one download over V2V, computed in
/// parallel at the pooled rate.
pub fn v2v_delay(
    task: &Payload,
    pooled_gips: f64,
    v2v_rate_mbps: f64,
) -> Result<DelayEstimate, DegeneratePool> {
    if pooled_gips <= 0.0 {
        return Err(DegeneratePool);
    }
    let comm =
        transfer_s(task.upload_kb, v2v_rate_mbps) + transfer_s(task.download_kb, v2v_rate_mbps);
    Ok(DelayEstimate::new(task.length_gi / pooled_gips, comm))
}

pub fn edge_delay(task: &Payload, edge_gips: f64, v2i_rate_mbps: f64) -> DelayEstimate {
    let comm =
        transfer_s(task.upload_kb, v2i_rate_mbps) + transfer_s(task.download_kb, v2i_rate_mbps);
    DelayEstimate::new(task.length_gi / edge_gips, comm)
}

/// Access hop then WAN hop, serially in both directions.
pub fn cloud_delay(
    task: &Payload,
    cloud_gips: f64,
    v2i_rate_mbps: f64,
    wan_rate_mbps: f64,
) -> DelayEstimate {
    let hop = |kb: f64| transfer_s(kb, v2i_rate_mbps) + transfer_s(kb, wan_rate_mbps);
    DelayEstimate::new(
        task.length_gi / cloud_gips,
        hop(task.upload_kb) + hop(task.download_kb),
    )
}
