from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd
import seaborn as sns

from ..data_loader import DataLoader

DELAY_PLOTS = {
    "scan_ms": "Probe Delay",
    "auth_ms": "Authentication Delay",
    "reassoc_ms": "Reassociation Delay",
    "total_ms": "Handoff Delay",
}


class HandoffVisualizationGenerator:
    """Generates delay, drop, load and RSSI trace plots from the handoff reports"""

    def __init__(self, output_dir: Path, max_paths: int = 100):
        self.output_dir = output_dir
        self.output_dir.mkdir(exist_ok=True, parents=True)
        self.max_paths = max_paths

    def generate_visualizations(self, loader: DataLoader):
        """Generate all handoff visualizations the loaded reports allow"""
        if loader.load("delay") is not None:
            self._visualize_delays(loader)
            self._visualize_load(loader)
        if loader.load("drops") is not None:
            self._visualize_drops(loader)
        if loader.load("rssi_trace") is not None:
            self._visualize_rssi_trace(loader.load("rssi_trace"))

    def _visualize_delays(self, loader: DataLoader):
        """One figure per delay component: per-path mean with the overall mean as a reference line"""
        rows = loader.path_rows("delay").head(self.max_paths)
        summary = loader.summary_row("delay")
        for component, title in DELAY_PLOTS.items():
            plt.figure(figsize=(12, 5))
            plt.plot(rows["path_id"], rows[component], marker=".", linewidth=1)
            if not summary.empty:
                mean = summary[component].iloc[0]
                plt.axhline(mean, color="red", linestyle="--", label=f"mean {mean:.2f} ms")
                plt.legend()
            plt.title(f"{title} per Path")
            plt.xlabel("Mobile path")
            plt.ylabel("Delay (ms)")
            plt.tight_layout()
            plt.savefig(self.output_dir / f"{component.removesuffix('_ms')}_delay.png")
            plt.close()

    def _visualize_load(self, loader: DataLoader):
        summary = loader.summary_row("delay")
        if summary.empty:
            return
        counts = pd.DataFrame(
            {
                "Load": ["Low", "Medium", "High"],
                "Handoffs": [summary[f"load_{kind}"].iloc[0] for kind in ("low", "medium", "high")],
            }
        )
        plt.figure(figsize=(8, 5))
        sns.barplot(data=counts, x="Load", y="Handoffs", palette="rocket")
        plt.title("BSS Load at (Re)association")
        plt.tight_layout()
        plt.savefig(self.output_dir / "load_classes.png")
        plt.close()

    def _visualize_drops(self, loader: DataLoader):
        rows = loader.path_rows("drops").head(self.max_paths)
        drops = rows.melt(
            id_vars="path_id",
            value_vars=["dropped_bits_with", "dropped_bits_without"],
            var_name="Reservation",
            value_name="Dropped bits",
        )
        drops["Reservation"] = drops["Reservation"].map(
            {"dropped_bits_with": "with reservation", "dropped_bits_without": "without reservation"}
        )

        plt.figure(figsize=(12, 5))
        sns.lineplot(data=drops, x="path_id", y="Dropped bits", hue="Reservation")
        plt.title("Bits Dropped per Path")
        plt.xlabel("Mobile path")
        plt.tight_layout()
        plt.savefig(self.output_dir / "dropped_bits.png")
        plt.close()

    def _visualize_rssi_trace(self, trace: pd.DataFrame):
        """Current and next AP readings along the first transition of the traced path"""
        if trace.empty:
            return
        first = trace[(trace["path_id"] == trace["path_id"].iloc[0]) & (trace["transition"] == 1)]

        plt.figure(figsize=(10, 5))
        plt.plot(first["sample"], first["current_rssi"] * 1e3, marker="o", label=f"AP {first['current_ap'].iloc[0]}")
        plt.plot(first["sample"], first["next_rssi"] * 1e3, marker="s", label=f"AP {first['next_ap'].iloc[0]}")
        for _, sample in first[first["event"] != "none"].iterrows():
            plt.annotate(sample["event"], (sample["sample"], sample["current_rssi"] * 1e3), fontsize=8)
        plt.yscale("log")
        plt.title("RSSI During a Handoff")
        plt.xlabel("Sample")
        plt.ylabel("RSSI (mW)")
        plt.legend()
        plt.tight_layout()
        plt.savefig(self.output_dir / "rssi_trace.png")
        plt.close()
