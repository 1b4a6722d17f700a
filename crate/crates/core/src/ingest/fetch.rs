//! Source URL convention for the upstream daily charts.
//!
//! Nothing here touches the network. Series are downloaded out of band and
//! saved as `<coin_id>.<metric>.csv`; these helpers only document where each
//! file comes from.

use super::Metric;

pub const SOURCE_BASE: &str = "https://bitinfocharts.com/comparison";

/// Chart page holding `metric` for `coin_id`, e.g.
/// `https://bitinfocharts.com/comparison/bitcoin-price.html`.
pub fn source_url(coin_id: &str, metric: Metric) -> String {
    let chart = match metric {
        Metric::PriceUsd => "price",
        Metric::BlockTimeMinutes => "confirmationtime",
        Metric::BlockSizeBytes => "size",
    };
    format!("{SOURCE_BASE}/{coin_id}-{chart}.html")
}

/// Local file name a downloaded series is expected under.
pub fn target_file_name(coin_id: &str, metric: Metric) -> String {
    format!("{coin_id}.{}.csv", metric.as_str())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn url_convention() {
        assert_eq!(source_url("bitcoin", Metric::PriceUsd), "https://bitinfocharts.com/comparison/bitcoin-price.html");
        assert_eq!(target_file_name("zcash", Metric::BlockTimeMinutes), "zcash.block_time_minutes.csv");
    }
}
