from grt.cli import main

main()
