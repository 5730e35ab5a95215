from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd
import seaborn as sns

from ..data_loader import DataLoader

PREDICTOR_LABELS = {
    "ltdmps_partial": "LTDMPS (partial LT)",
    "ltdmps_full": "LTDMPS (full LT)",
    "lt": "LT",
    "dm": "DM",
    "tm": "TM",
    "ip": "IP",
}


class PredictionVisualizationGenerator:
    """Generates accuracy and frequency-rank plots from accuracy.csv and rank_histogram.csv"""

    def __init__(self, output_dir: Path, max_paths: int = 30):
        """
        Initialize generator with output directory

        Args:
            output_dir: Directory the figures are written to
            max_paths: Paths shown on per-path plots
        """
        self.output_dir = output_dir
        self.output_dir.mkdir(exist_ok=True, parents=True)
        self.max_paths = max_paths

    def generate_visualizations(self, loader: DataLoader):
        """Generate all prediction visualizations the loaded reports allow"""
        if loader.load("accuracy") is not None:
            self._visualize_overall_accuracy(loader)
            self._visualize_path_accuracy(loader)
        if loader.load("ranks") is not None:
            self._visualize_rank_histogram(loader.load("ranks"))

    def _visualize_overall_accuracy(self, loader: DataLoader):
        summary = loader.summary_row("accuracy")
        expected = loader.summary_row("accuracy", "ip_expected")

        plt.figure(figsize=(10, 6))
        sns.barplot(
            x=[PREDICTOR_LABELS.get(name, name) for name in summary["predictor"]],
            y=summary["accuracy"].tolist(),
            palette="viridis",
        )
        if expected is not None and not expected.empty:
            plt.axhline(expected["accuracy"].iloc[0], color="grey", linestyle="--", label="IP expectation")
            plt.legend()
        plt.title("Overall Prediction Accuracy")
        plt.ylabel("Accuracy (%)")
        plt.ylim(0, 100)
        plt.xticks(rotation=30)
        plt.tight_layout()
        plt.savefig(self.output_dir / "overall_accuracy.png")
        plt.close()

    def _visualize_path_accuracy(self, loader: DataLoader):
        """One line per predictor over the first paths, as in the per-path accuracy figures"""
        rows = loader.path_rows("accuracy")
        rows = rows[rows["path_id"] <= rows["path_id"].drop_duplicates().nsmallest(self.max_paths).max()]
        rows = rows.assign(predictor=rows["predictor"].map(lambda name: PREDICTOR_LABELS.get(name, name)))

        plt.figure(figsize=(12, 6))
        sns.lineplot(data=rows, x="path_id", y="accuracy", hue="predictor", marker="o")
        plt.title(f"Prediction Accuracy per Path (first {self.max_paths} paths)")
        plt.xlabel("Mobile path")
        plt.ylabel("Accuracy (%)")
        plt.ylim(-5, 105)
        plt.tight_layout()
        plt.savefig(self.output_dir / "path_accuracy.png")
        plt.close()

    def _visualize_rank_histogram(self, ranks: pd.DataFrame):
        ranks = ranks[ranks["predictor"].isin(["ltdmps_partial", "tm"])].copy()
        if ranks.empty:
            return
        ranks["predictor"] = ranks["predictor"].map(PREDICTOR_LABELS)
        order = sorted((rank for rank in ranks["rank"].astype(str).unique() if rank.isdigit()), key=int)
        order += [rank for rank in ranks["rank"].astype(str).unique() if not rank.isdigit()]

        plt.figure(figsize=(10, 6))
        sns.barplot(data=ranks.astype({"rank": str}), x="rank", y="count", hue="predictor", order=order)
        plt.title("Frequency Rank of the Actual Next AP")
        plt.xlabel("Rank")
        plt.ylabel("Transitions")
        plt.tight_layout()
        plt.savefig(self.output_dir / "rank_histogram.png")
        plt.close()
