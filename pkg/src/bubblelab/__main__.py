from .report_cli import main

main()
