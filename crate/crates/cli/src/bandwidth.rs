use clap::Args;
use spexpm::sparse::real_bandwidth_estimate;
use spexpm::Result;

use crate::args::InputArgs;

#[derive(Args, Debug)]
pub struct BandwidthArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

pub fn execute(args: &BandwidthArgs) -> Result<()> {
    let input = args.input.load()?;
    let a = &input.matrix;
    let native = a.bandwidth();
    let (estimate, _) = real_bandwidth_estimate(a);
    println!("input = {}", input.label);
    println!("n = {}", a.n());
    println!("nnz = {}", a.nnz());
    println!("sparsity = {:e}", a.sparsity());
    println!("l1 = {}", native.upper);
    println!("l2 = {}", native.lower);
    println!("l = {}", native.total);
    println!("l_rcm = {}", estimate.total);
    Ok(())
}
