import typer

import critherm
import critherm.cli.cli_config
from critherm.cli.cli_design import baseline, noise, optimal_gap_cmd
from critherm.cli.cli_run import reproduce, scaling, spectrum, sweep

app = typer.Typer(name="critherm")
app.command(
    name="spectrum",
    help="Lowest energy gaps over a grid of the control parameter",
)(spectrum)
app.command(
    name="sweep",
    help="Evaluate F_Q, SNR and observable sensitivities over a (lambda, T) grid",
)(sweep)
app.command(
    name="scaling",
    help="Finite-size scaling curves and collapse residuals",
)(scaling)
app.command(
    name="optimal-gap",
    help="Optimal single-gap spectrum for an m-fold excited level",
)(optimal_gap_cmd)
app.command(
    name="baseline",
    help="QFI of the non-interacting ladder and its maximum",
)(baseline)
app.command(
    name="noise",
    help="Fisher information loss under Gaussian detection noise",
)(noise)
app.command(
    name="reproduce",
    help="Regenerate the datasets behind one figure",
)(reproduce)
app.add_typer(critherm.cli.cli_config.app, name="config")


@app.command()
def version():
    """Print the critherm version."""
    typer.echo(critherm.__version__)


typer_click_object = typer.main.get_command(app)

if __name__ == "__main__":
    app()
