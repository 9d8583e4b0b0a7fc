from lietype.cli import main

raise SystemExit(main())
