from thetanorm.core.runner import main

main()
