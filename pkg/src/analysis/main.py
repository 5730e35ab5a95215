from pathlib import Path
from typing import Dict

import click
from loguru import logger

from .data_loader import DataLoader
from .utils import save_metrics, setup_output_directories
from .visualization import HandoffVisualizationGenerator, PredictionVisualizationGenerator


class Analyzer:
    """Main analyzer class that turns one results directory into figures and a metrics summary"""

    def __init__(self, results_path: str):
        """Initialize analyzer with path to results directory"""
        self.results_path = Path(results_path)
        self.data_loader = DataLoader(results_path)
        self.directories = setup_output_directories(self.results_path)

        self.prediction_viz = PredictionVisualizationGenerator(self.directories["prediction"])
        self.handoff_viz = HandoffVisualizationGenerator(self.directories["handoff"])

    def collect_metrics(self) -> Dict:
        """Headline numbers of every available report"""
        metrics: Dict = {}

        accuracy = self.data_loader.summary_row("accuracy")
        if accuracy is not None:
            metrics["accuracy"] = dict(zip(accuracy["predictor"], accuracy["accuracy"]))
            expected = self.data_loader.summary_row("accuracy", "ip_expected")
            if not expected.empty:
                metrics["ip_expected"] = expected["accuracy"].iloc[0]

        delay = self.data_loader.summary_row("delay")
        if delay is not None and not delay.empty:
            components = [column for column in delay.columns if column.endswith("_ms")]
            metrics["delay_ms"] = {component: delay[component].iloc[0] for component in components}

        drops = self.data_loader.summary_row("drops")
        if drops is not None and not drops.empty:
            metrics["drops"] = {
                column: drops[column].iloc[0] for column in drops.columns if column not in ("row_type", "path_id")
            }
        return metrics

    def generate_report(self) -> Dict:
        """
        Write metrics.json and every figure the available reports allow.

        Returns:
            Dict: The collected metrics
        """
        metrics = self.collect_metrics()
        save_metrics(metrics, self.directories["output"])

        self.prediction_viz.generate_visualizations(self.data_loader)
        self.handoff_viz.generate_visualizations(self.data_loader)
        logger.info(f"Analysis written to {self.directories['output']}")
        return metrics


@click.command()
@click.argument("results_dir", type=click.Path(exists=True, file_okay=False), default="results")
def main(results_dir: str) -> None:
    """Plot the CSV reports in RESULTS_DIR."""
    Analyzer(results_dir).generate_report()


if __name__ == "__main__":
    main()
