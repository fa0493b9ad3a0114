from popforecast.cli import run

run()
