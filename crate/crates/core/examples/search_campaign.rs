//! A TOML campaign file run with a checkpoint, then resumed.
//!
//!     cargo run --release --example search_campaign

use nmds::search::{run_campaign, RunOptions, SearchCampaign};

const CAMPAIGN: &str = r#"
mode = "reduced-dls"
n = 5
l = 3
field = "4:0x13"
k_set = [4, 5]
"#;

fn main() -> nmds::Result<()> {
    let c = SearchCampaign::from_toml(CAMPAIGN)?;
    let dir = std::env::temp_dir().join("nmds-campaign-example");
    std::fs::create_dir_all(&dir)?;
    let cp = dir.join("checkpoint.json");
    let _ = std::fs::remove_file(&cp);
    let opts = RunOptions {
        jobs: Some(2),
        checkpoint: Some(cp.clone()),
    };
    let first = run_campaign(&c, &opts)?;
    // a second run picks up the finished checkpoint and reports the same thing
    let again = run_campaign(&c, &opts)?;
    println!("{}", nmds::canonical_json(&first)?);
    println!(
        "resumed report identical: {}",
        nmds::canonical_json(&first)? == nmds::canonical_json(&again)?
    );
    Ok(())
}
