//! Write the helicoid and its twin as OBJ meshes and CSV fields.

use std::fs;

use twinsurf::catalog::{self, mesh::export_obj};
use twinsurf::io::write_scalar_csv;
use twinsurf::twin1::twin_transform;

fn main() -> twinsurf::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "target/twinsurf-demo".into());
    fs::create_dir_all(&dir)?;
    let data = catalog::eval_example::<&str>("helicoid_R3", &[], 81)?;
    let twin = twin_transform(&data)?;
    fs::write(format!("{dir}/helicoid.obj"), export_obj(&data.f)?)?;
    fs::write(format!("{dir}/lorentz_catenoid.obj"), export_obj(&twin.g)?)?;
    write_scalar_csv(fs::File::create(format!("{dir}/helicoid.csv"))?, &data.f)?;
    write_scalar_csv(fs::File::create(format!("{dir}/lorentz_catenoid.csv"))?, &twin.g)?;
    println!("wrote {} vertices per mesh to {dir}", data.grid().masked_count());
    Ok(())
}
