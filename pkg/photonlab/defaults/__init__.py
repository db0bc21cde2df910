from argparse import ArgumentParser


class DefaultConfig:
    r"""
    Output options shared by every `photonlab` command: where run reports, histograms, figures and tag files go.
    Scenario commands add their own run options on top.
    """

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        parser.add_argument(
            '--out',
            dest='output_dir',
            type=str,
            required=False,
            default=None,
            help='Folder where reports, histograms, figures and tags are written, defaults to outputs'
        )
        parser.add_argument(
            '--name',
            type=str,
            required=False,
            default=None,
            help='Sub-folder of the run inside the output folder, defaults to the scenario name'
        )
